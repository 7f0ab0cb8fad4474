//! Primitive embeddings of abelian-surface source lattices into
//! `Λ = U(2) ⊕ U ⊕ E8(2)`, and the restricted tube-domain families they induce.

pub mod discriminant;
mod source;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use discriminant::{mirror_scan, mirror_status, mirror_status_with, orthogonal_complement, CrossingPolicy, MirrorScan, MirrorStatus};
pub use source::{derive_source_gram, humbert_splitting, pair_complex, period_vector, SourceCase, SourceLattice};

use crate::error::{Error, Result};
use crate::lattice::{e8_2, lambda, level_layout, unit, IntegralLattice};

/// Search limits for [`find_embeddings`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Bound on the absolute value of every coordinate of a candidate image.
    pub height: i64,
    /// Bound on `|v²|` for the `E8(2)` component of a candidate.
    pub e8_norm: i64,
    /// Candidates tried per label before backtracking.
    pub branch: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { height: 6, e8_norm: 8, branch: 24 }
    }
}

/// Images of the source labels `e, f', a, b[, c]` in `Λ` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub case: SourceCase,
    pub level: u8,
    pub images: Vec<Vec<i64>>,
}

/// Coefficients of `z(T) = (A + B·T11 + C·T12 + D·T22)/2` in `M_ℓ` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodCoeffs {
    pub level: u8,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
    pub d: Vec<i64>,
}

impl Embedding {
    /// Checks primitivity, that the image Gram equals the source Gram, and mirror avoidance.
    pub fn verify(&self) -> Result<()> {
        let l = lambda();
        let src = derive_source_gram(self.case);
        if self.images.len() != src.gram.len() {
            return Err(Error::Lattice("wrong number of images".into()));
        }
        for (i, x) in self.images.iter().enumerate() {
            for (j, y) in self.images.iter().enumerate() {
                if l.inner(x, y)? != src.gram[i][j] {
                    return Err(Error::Lattice(format!("image Gram differs at ({i},{j})")));
                }
            }
        }
        let (_, e_l, _) = level_layout(self.level)?;
        if self.images[0] != unit(12, e_l) {
            return Err(Error::Lattice("label e must map to e_ℓ".into()));
        }
        if !l.is_primitive(&self.images)? {
            return Err(Error::Lattice("image is not primitive".into()));
        }
        if self.case == SourceCase::Jacobian {
            return match humbert_class(&l, &self.images)? {
                Some(_) => Ok(()),
                None => Err(Error::Discriminant("mirrors meet the family outside one theta-null class".into())),
            };
        }
        match mirror_status(&l, &self.images)? {
            MirrorStatus::Clear => Ok(()),
            MirrorStatus::RootInComplement(d) => Err(Error::Discriminant(format!("root {d:?} orthogonal to the image"))),
            MirrorStatus::Crossing(d) => Err(Error::Discriminant(format!("mirror of {d:?} meets the family"))),
        }
    }

    /// The tube-domain coefficients `A, B, C, D` of the restricted family.
    pub fn period_coeffs(&self) -> Result<PeriodCoeffs> {
        period_coeffs_of(self.level, &self.images)
    }
}

fn period_coeffs_of(level: u8, images: &[Vec<i64>]) -> Result<PeriodCoeffs> {
    let (idx, _, _) = level_layout(level)?;
    let proj = |x: &[i64]| -> Vec<i64> { idx.iter().map(|&i| x[i]).collect() };
    // ϖ/⟨f',e⟩ = -(z²/2) e + f/ℓ + s z with s = (-1)^{2/ℓ} and ⟨f',e⟩ = -2
    let s: i64 = if level == 1 { 1 } else { -1 };
    let scale = |v: Vec<i64>, k: i64| v.into_iter().map(|x| x * k).collect::<Vec<_>>();
    let a = scale(proj(&images[1]), -s);
    let b = scale(proj(&images[2]), -s);
    let d = scale(proj(&images[3]), s);
    let c = if images.len() > 4 { scale(proj(&images[4]), s) } else { vec![0; idx.len()] };
    Ok(PeriodCoeffs { level, a, b, c, d })
}

/// Whether an isotropic vector of `M_ℓ` lies in the closure of the positive cone
/// containing the hyperbolic generators of `M_ℓ`.
pub fn in_positive_cone(m: &IntegralLattice, x: &[i64]) -> Result<bool> {
    let mut r = vec![0i64; m.rank()];
    r[0] = 1;
    r[1] = 1;
    Ok(m.norm(x)? >= 0 && m.inner(x, &r)? > 0)
}

struct Pools {
    by_norm_pair: HashMap<(i64, i64), Vec<usize>>,
    vectors: Vec<Vec<i64>>,
}

fn e8_pool(limits: &SearchLimits, probe: &[i64]) -> Result<Pools> {
    let e8 = e8_2();
    let mut vectors = vec![vec![0i64; 8]];
    for v in e8.short_vectors(limits.e8_norm)? {
        if v.iter().any(|x| x.abs() > limits.height) {
            continue;
        }
        vectors.push(v.iter().map(|x| -x).collect());
        vectors.push(v);
    }
    let mut by_norm_pair: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, v) in vectors.iter().enumerate() {
        let key = (e8.norm(v)?, e8.inner(v, probe)?);
        by_norm_pair.entry(key).or_default().push(i);
    }
    Ok(Pools { by_norm_pair, vectors })
}

/// Candidates `x` with `x² = norm` and `⟨x, w_i⟩ = t_i`, sorted by size.
fn candidates(limits: &SearchLimits, norm: i64, cons: &[(Vec<i64>, i64)]) -> Result<Vec<Vec<i64>>> {
    let probe: Vec<i64> = cons.last().map(|(w, _)| w[4..].to_vec()).unwrap_or_else(|| vec![0; 8]);
    let pools = e8_pool(limits, &probe)?;
    let e8 = e8_2();
    let h = limits.height;
    let mut out = Vec::new();
    for x0 in -h..=h {
        for x1 in -h..=h {
            for x2 in -h..=h {
                for x3 in -h..=h {
                    let hyp = [x0, x1, x2, x3];
                    let hnorm = 4 * x0 * x1 + 2 * x2 * x3;
                    let need = norm - hnorm;
                    if need > 0 || need < -limits.e8_norm {
                        continue;
                    }
                    let hyp_pair = |w: &[i64]| 2 * (x0 * w[1] + x1 * w[0]) + x2 * w[3] + x3 * w[2];
                    let key_pair = cons.last().map_or(0, |(w, t)| t - hyp_pair(w));
                    let Some(list) = pools.by_norm_pair.get(&(need, key_pair)) else { continue };
                    'cand: for &vi in list {
                        let v = &pools.vectors[vi];
                        for (w, t) in cons.iter().rev().skip(1) {
                            if hyp_pair(w) + e8.inner(v, &w[4..])? != *t {
                                continue 'cand;
                            }
                        }
                        let mut x = hyp.to_vec();
                        x.extend_from_slice(v);
                        out.push(x);
                    }
                }
            }
        }
    }
    out.sort_by_key(|x| {
        let height = x.iter().map(|c| c.abs()).max().unwrap_or(0);
        let size: i64 = x.iter().map(|c| c.abs()).sum();
        (height, size, x.clone())
    });
    Ok(out)
}

/// Deterministic backtracking search for primitive, mirror-avoiding embeddings
/// of the source lattice with `e ↦ e_ℓ`.
///
/// The Jacobian source is the product source plus an orthogonal `c` of norm `-4`, so
/// its embeddings extend mirror-free product embeddings by a vector of the negative
/// definite complement. Its family must meet mirrors along the diagonal Humbert locus,
/// where the target theta constant vanishes, and nowhere else.
pub fn find_embeddings(case: SourceCase, level: u8, max_results: usize, limits: &SearchLimits) -> Result<Vec<Embedding>> {
    let l = lambda();
    let m = crate::lattice::m_level(level)?;
    let product = derive_source_gram(SourceCase::Product);
    let (_, e_l, _) = level_layout(level)?;
    let mut found: Vec<Embedding> = Vec::new();
    let mut chosen = vec![unit(12, e_l)];
    let accept = |images: Vec<Vec<i64>>, found: &mut Vec<Embedding>| -> Result<()> {
        let mut images = images;
        let pc = period_coeffs_of(level, &images)?;
        if !in_positive_cone(&m, &pc.b)? {
            for i in [2, 3] {
                images[i] = images[i].iter().map(|x| -x).collect();
            }
        }
        let emb = Embedding { case, level, images };
        if !found.contains(&emb) {
            found.push(emb);
        }
        Ok(())
    };
    search(&l, &product, limits, &mut chosen, &mut |k| {
        match case {
            SourceCase::Product => accept(k.to_vec(), &mut found)?,
            SourceCase::Jacobian => {
                for c in extensions(&l, k)? {
                    let mut images = k.to_vec();
                    images.push(c);
                    if l.is_primitive(&images)? && humbert_class(&l, &images)?.is_some() {
                        accept(images, &mut found)?;
                        if found.len() >= max_results {
                            break;
                        }
                    }
                }
            }
        }
        Ok(found.len() < max_results)
    })?;
    Ok(found)
}

/// Number of crossing mirrors sampled when checking a Jacobian family.
const CROSSING_SAMPLE: usize = 64;

/// The splitting class shared by every sampled crossing mirror of a Jacobian image, if
/// no other mirror meets the family and at least one crossing was sampled.
///
/// A genus-2 theta constant vanishes on exactly the diagonal Humbert components of one
/// splitting class, so a family on which `Φ` restricts to a theta power meets mirrors only
/// along one class.
pub fn humbert_class(l: &IntegralLattice, images: &[Vec<i64>]) -> Result<Option<u8>> {
    let scan = mirror_scan(l, images, CrossingPolicy::DiagonalHumbert, CROSSING_SAMPLE)?;
    if scan.status != MirrorStatus::Clear {
        return Ok(None);
    }
    let mut class = None;
    for v in &scan.allowed {
        match (humbert_splitting(v), class) {
            (None, _) => return Ok(None),
            (Some(k), None) => class = Some(k),
            (Some(k), Some(c)) if k != c => return Ok(None),
            _ => {}
        }
    }
    Ok(class)
}

/// Vectors `c ⊥ K` with `c² = -4`, one of each `±c`, in enumeration order.
fn extensions(l: &IntegralLattice, k: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let perp = orthogonal_complement(l, k)?;
    let neg: Vec<Vec<f64>> = perp
        .iter()
        .map(|a| perp.iter().map(|b| l.inner(a, b).map(|x| -(x as f64))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for y in crate::lattice::ellipsoid_points(&neg, &vec![0.0; perp.len()], 4.0, crate::lattice::budget())? {
        let c: Vec<i64> = (0..l.rank()).map(|t| perp.iter().zip(&y).map(|(v, a)| v[t] * a).sum()).collect();
        if l.norm(&c)? != -4 {
            continue;
        }
        if c.iter().find(|x| **x != 0).is_some_and(|x| *x > 0) {
            out.push(c);
        }
    }
    out.sort_by_key(|x| (x.iter().map(|c| c.abs()).sum::<i64>(), x.clone()));
    Ok(out)
}

/// Visits mirror-free product embeddings; `leaf` returns `false` to stop.
fn search(
    l: &IntegralLattice,
    src: &SourceLattice,
    limits: &SearchLimits,
    chosen: &mut Vec<Vec<i64>>,
    leaf: &mut dyn FnMut(&[Vec<i64>]) -> Result<bool>,
) -> Result<bool> {
    let k = chosen.len();
    if k == src.gram.len() {
        if mirror_status(l, chosen)? != MirrorStatus::Clear {
            return Ok(true);
        }
        return leaf(chosen);
    }
    let cons: Vec<(Vec<i64>, i64)> = chosen.iter().enumerate().map(|(i, v)| (v.clone(), src.gram[k][i])).collect();
    let cands = candidates(limits, src.gram[k][k], &cons)?;
    let mut tried = 0usize;
    for x in cands {
        if tried >= limits.branch {
            break;
        }
        chosen.push(x);
        let mut go = true;
        if l.is_primitive(chosen)? {
            tried += 1;
            go = search(l, src, limits, chosen, leaf)?;
        }
        chosen.pop();
        if !go {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_coeffs_pair_like_the_source() {
        let emb = find_embeddings(SourceCase::Product, 1, 1, &SearchLimits::default()).unwrap();
        assert!(!emb.is_empty());
        let pc = emb[0].period_coeffs().unwrap();
        let m = crate::lattice::m1();
        assert_eq!(m.inner(&pc.b, &pc.d).unwrap(), 2);
        assert_eq!(m.norm(&pc.b).unwrap(), 0);
        assert!(in_positive_cone(&m, &pc.b).unwrap());
        assert!(in_positive_cone(&m, &pc.d).unwrap());
    }
}

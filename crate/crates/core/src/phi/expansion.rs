//! Exact Fourier expansion of `Φ_ℓ` restricted to a tube-domain family
//! `z(T) = (A + B·T11 + C·T12 + D·T22)/2`, in `u_mn = e^{πiT_mn/2}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{in_positive_cone, PeriodCoeffs};
use crate::error::{Error, Result};
use crate::lattice::{m_level, IntegralLattice};
use crate::qseries::{binomials, CTable, Exp3, GaussInt, MultiSeries};

/// Exponent denominator of the `u`-variables.
pub const U_DEN: i64 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionStats {
    /// Lattice vectors visited across all slices.
    pub vectors: u64,
    /// Distinct `(exponent, phase)` factors multiplied together.
    pub factors: usize,
    /// Roots orthogonal to `B, C, D` contributing constant factors.
    pub flat_roots: usize,
    /// Roots of `Π⁺` whose factor was inverted to land in the family's chamber.
    pub flipped_roots: usize,
    /// Roots orthogonal to `B, D` but not `C`; their mirrors cross the family.
    pub wall_roots: usize,
    /// Exponent of the leading monomial, in `u` units.
    pub leading: Exp3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedExpansion {
    pub level: u8,
    pub coeffs: PeriodCoeffs,
    pub series: MultiSeries,
    pub order: i64,
    pub stats: ExpansionStats,
}

/// Key of an aggregated factor `(1 - i^phase · u^E)^k`.
type FactorKey = (Exp3, u8);

struct Family {
    m: IntegralLattice,
    level: u8,
    a: Vec<i64>,
    b: Vec<i64>,
    c: Vec<i64>,
    d: Vec<i64>,
}

impl Family {
    fn new(pc: &PeriodCoeffs) -> Result<Self> {
        let m = m_level(pc.level)?;
        for v in [&pc.a, &pc.b, &pc.c, &pc.d] {
            if v.len() != m.rank() {
                return Err(Error::InvalidArgument(format!("coefficients must have length {}", m.rank())));
            }
        }
        if m.norm(&pc.b)? != 0 || m.norm(&pc.d)? != 0 {
            return Err(Error::InvalidArgument("B and D must be isotropic".into()));
        }
        if m.inner(&pc.b, &pc.d)? <= 0 || !in_positive_cone(&m, &pc.b)? {
            return Err(Error::InvalidArgument("B, D must lie in the closed positive cone with ⟨B,D⟩ > 0".into()));
        }
        if m.inner(&pc.c, &pc.b)? != 0 || m.inner(&pc.c, &pc.d)? != 0 || m.norm(&pc.c)? > 0 {
            return Err(Error::InvalidArgument("C must be orthogonal to B, D with C² ≤ 0".into()));
        }
        Ok(Family { m, level: pc.level, a: pc.a.clone(), b: pc.b.clone(), c: pc.c.clone(), d: pc.d.clone() })
    }

    fn exps(&self, x: &[i64]) -> Result<Exp3> {
        Ok((self.m.inner(x, &self.b)?, self.m.inner(x, &self.c)?, self.m.inner(x, &self.d)?))
    }

    /// `u`-exponent multiplier: `e^{πi⟨λ,z⟩}` at level 1, `e^{2πi⟨λ,z⟩}` at level 2.
    fn mult(&self) -> i64 {
        i64::from(self.level)
    }
}

/// Counts per slice keyed by `(s, A-phase, λ²/2, sign bit)`.
type SliceCounts = BTreeMap<(i64, i64, i64, i64), u64>;

fn scan_slice(f: &Family, p: i64, r: i64, min_norm: i64) -> Result<(SliceCounts, u64)> {
    let mut counts = SliceCounts::new();
    let mut seen = 0u64;
    let Some(slice) = f.m.slice(&[(f.b.clone(), p), (f.d.clone(), r)])? else {
        return Ok((counts, 0));
    };
    let fa = slice.functional(&f.m, &f.a)?;
    let fc = slice.functional(&f.m, &f.c)?;
    // ⟨λ, e1 - f1⟩ in M2 coordinates, used only for the level-2 sign rule
    let mut w = vec![0i64; f.m.rank()];
    w[0] = 1;
    w[1] = -1;
    let fe = slice.functional(&f.m, &w)?;
    let level = f.level;
    slice.visit(min_norm, &mut |k, nrm| {
        seen += 1;
        let s = fc.at(k);
        let phase = if level == 1 { fa.at(k).rem_euclid(4) } else { fa.at(k).rem_euclid(2) };
        let sign = if level == 1 { 0 } else { fe.at(k).rem_euclid(2) };
        *counts.entry((s, phase, nrm / 2, sign)).or_default() += 1;
        Ok(())
    })?;
    Ok((counts, seen))
}

/// Assembles the truncated restricted product to total `q`-degree `order`.
pub fn restricted_expansion(pc: &PeriodCoeffs, order: i64) -> Result<RestrictedExpansion> {
    if order < 1 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let f = Family::new(pc)?;
    let mult = f.mult();
    let bound = order * U_DEN;
    let min_norm = if f.level == 1 { 0 } else { -2 };

    let mut slices = Vec::new();
    for t in 1.. {
        if mult * t >= bound {
            break;
        }
        for p in 0..=t {
            slices.push((p, t - p));
        }
    }
    let scanned: Vec<((i64, i64), (SliceCounts, u64))> = slices
        .par_iter()
        .map(|&(p, r)| scan_slice(&f, p, r, min_norm).map(|c| ((p, r), c)))
        .collect::<Result<_>>()?;

    let max_c = scanned
        .iter()
        .flat_map(|(_, (c, _))| c.keys().map(|k| k.2))
        .max()
        .unwrap_or(0);
    let ctab = CTable::new(max_c.max(1))?;
    let mut vectors = 0u64;
    let mut factors: BTreeMap<FactorKey, i128> = BTreeMap::new();
    for ((p, r), (counts, seen)) in &scanned {
        vectors += seen;
        for ((s, phase, half, sign), cnt) in counts {
            let c = ctab.get(*half)?;
            let k = (*cnt as i128).checked_mul(c).ok_or(Error::Overflow("factor exponent"))?;
            let e = (mult * p, mult * s, mult * r);
            if f.level == 1 {
                // ((1 - ρx)/(1 + ρx))^c with ρ = i^phase
                *factors.entry((e, *phase as u8)).or_default() += k;
                *factors.entry((e, ((*phase + 2) % 4) as u8)).or_default() -= k;
            } else {
                let k = if *sign == 1 { -k } else { k };
                *factors.entry((e, (2 * phase) as u8)).or_default() += k;
            }
        }
    }

    let pre = if f.level == 1 {
        Prefactor { coef: GaussInt::ONE, lead: (0, 0, 0), flat: 0, flipped: 0, wall: 0 }
    } else {
        match level2_prefactor(&f, &mut factors)? {
            Some(x) => x,
            None => {
                let series = MultiSeries::zero(U_DEN, order)?;
                let stats =
                    ExpansionStats { vectors, factors: 0, flat_roots: 1, flipped_roots: 0, wall_roots: 0, leading: (0, 0, 0) };
                return Ok(RestrictedExpansion { level: f.level, coeffs: pc.clone(), series, order, stats });
            }
        }
    };
    factors.retain(|_, k| *k != 0);
    let lead = pre.lead;

    let mut series = MultiSeries::zero(U_DEN, order)?;
    series.set(lead, pre.coef)?;
    let mut ordered: Vec<(&FactorKey, &i128)> = factors.iter().collect();
    ordered.sort_by_key(|((e, ph), _)| (e.0 + e.2, *e, *ph));
    for ((e, phase), k) in ordered {
        let deg = e.0 + e.2;
        let jmax = if deg == 0 {
            // a pure T12 factor is a polynomial only for positive multiplicity
            if *k < 0 {
                return Err(Error::Convergence(format!("factor at {e:?} has negative multiplicity {k}")));
            }
            *k as usize
        } else {
            ((bound - 1 - (lead.0 + lead.2)).max(0) / deg) as usize
        };
        if jmax == 0 {
            continue;
        }
        let bin = binomials(*k, jmax)?;
        let neg_rho = GaussInt::i_pow(i64::from(*phase) + 2);
        let mut fac = MultiSeries::zero(U_DEN, order)?;
        let mut pw = GaussInt::ONE;
        for (j, cb) in bin.iter().enumerate() {
            let j = j as i64;
            fac.set((j * e.0, j * e.1, j * e.2), pw.checked_scale(*cb)?)?;
            pw = pw.checked_mul(neg_rho)?;
        }
        series = series.mul(&fac)?;
    }
    if let Some((e, c)) = series.terms().find(|(_, c)| c.im != 0) {
        return Err(Error::InvalidArgument(format!("non-integer coefficient {c} at {e:?}")));
    }
    let stats = ExpansionStats {
        vectors,
        factors: factors.len(),
        flat_roots: pre.flat,
        flipped_roots: pre.flipped,
        wall_roots: pre.wall,
        leading: lead,
    };
    Ok(RestrictedExpansion { level: f.level, coeffs: pc.clone(), series, order, stats })
}

struct Prefactor {
    coef: GaussInt,
    lead: Exp3,
    flat: usize,
    flipped: usize,
    wall: usize,
}

/// The sign rule of the level-2 product: `+1` or `-1` by the parity of `⟨λ, e1 - f1⟩`.
fn level2_sign(lam: &[i64]) -> i128 {
    if (lam[0] - lam[1]).rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// Constant and leading monomial at level 2, or `None` if a flat root kills the product.
///
/// The family's chamber is taken with `Im T12` small and positive, so a root orthogonal
/// to `B, D` with `⟨λ,C⟩ > 0` counts as positive; its factor, a polynomial in `u12`, is
/// added to `factors`.
fn level2_prefactor(f: &Family, factors: &mut BTreeMap<FactorKey, i128>) -> Result<Option<Prefactor>> {
    let m = &f.m;
    let n = m.rank();
    let mut coef = GaussInt::from_int(256);

    // roots orthogonal to B, D: constant factors (1 - (-1)^{⟨r,A⟩}) on the Π⁺ side when
    // also orthogonal to C, wall factors otherwise
    let mut flat = 0usize;
    let mut wall = 0usize;
    for r in m.affine_slice(&[(f.b.clone(), 0), (f.d.clone(), 0)], -2)? {
        if m.norm(&r)? != -2 {
            continue;
        }
        let s = m.inner(&r, &f.c)?;
        let phase = m.inner(&r, &f.a)?.rem_euclid(2);
        if s > 0 {
            wall += 1;
            *factors.entry(((0, 2 * s, 0), (2 * phase) as u8)).or_default() += level2_sign(&r);
            continue;
        }
        if s < 0 || r[1] <= 0 {
            continue;
        }
        flat += 1;
        if phase == 0 {
            return Ok(None);
        }
        coef = coef.checked_scale(2)?;
    }

    // roots of Π⁺ (⟨λ,e1⟩ > 0) on the far side of the family: ⟨λ,y⟩ ≥ 0 for y = B + D
    // but ⟨λ,e1⟩ < 0, so ⟨λ, 2e1 + f1⟩ ≤ -1; the Gram of (y, y0) bounds both pairings
    let y: Vec<i64> = f.b.iter().zip(&f.d).map(|(x, z)| x + z).collect();
    let mut y0 = vec![0i64; n];
    y0[0] = 2;
    y0[1] = 1;
    let (yy, yy0, y0y0) = (m.norm(&y)?, m.inner(&y, &y0)?, m.norm(&y0)?);
    let det = yy * y0y0 - yy0 * yy0;
    if det >= 0 {
        return Err(Error::InvalidArgument("reference plane must be hyperbolic".into()));
    }
    let hmax = ((2 * -det) as f64 / y0y0 as f64).sqrt().floor() as i64;
    let kmax = ((2 * -det) as f64 / yy as f64).sqrt().floor() as i64;
    // Weyl vector e1, shifted by every flipped root
    let mut weyl = vec![0i64; n];
    weyl[0] = 1;
    let mut flipped = 0usize;
    for h in 0..=hmax {
        for k in -kmax..=-1 {
            for lam in m.affine_slice(&[(y.clone(), h), (y0.clone(), k)], -2)? {
                if m.norm(&lam)? != -2 || lam[1] >= 0 {
                    continue;
                }
                let e = f.exps(&lam)?;
                if e.0 + e.2 == 0 && e.1 <= 0 {
                    continue;
                }
                // 1 - x_λ = -x_λ (1 - x_{-λ}) moves λ into the product side
                flipped += 1;
                coef = coef.checked_neg()?;
                for (wi, li) in weyl.iter_mut().zip(&lam) {
                    *wi -= li;
                }
            }
        }
    }
    if m.inner(&weyl, &f.a)?.rem_euclid(2) == 1 {
        coef = coef.checked_neg()?;
    }
    let (p, s, r) = f.exps(&weyl)?;
    let lead = (2 * p, 2 * s, 2 * r);
    if p < 0 || r < 0 || p + r == 0 {
        return Err(Error::InvalidArgument(format!("leading exponent {lead:?} has no positive valuation")));
    }
    Ok(Some(Prefactor { coef, lead, flat, flipped, wall }))
}

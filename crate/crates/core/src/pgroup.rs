//! Finite abelian p-groups, socle series and colimits of injective sequences.
//!
//! A map `⊕ Z/p^{a_j} -> ⊕ Z/p^{b_i}` is an integer matrix whose column `j`
//! is the image of the `j`-th generator, entry `(i, j)` read mod `p^{b_i}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PGroupError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponents must be positive")]
    ZeroExponent,
    #[error("p^N too large for exact arithmetic (p = {0}, N = {1})")]
    Overflow(u64, u32),
    #[error("matrix has shape {0}x{1}, expected {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("entry ({0}, {1}) does not define a homomorphism")]
    NotWellDefined(usize, usize),
    #[error("map {0} in the sequence is not injective")]
    NotInjective(usize),
    #[error("not Cauchy: socle dimension still changes at index {0}")]
    NotCauchy(usize),
    #[error("horizon insufficient: {0}")]
    HorizonInsufficient(String),
    #[error("maps are not composable")]
    NotComposable,
}

type R<T> = Result<T, PGroupError>;

/// `⊕ Z/p^{e}` over the listed exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PGroup {
    pub p: u64,
    pub exponents: Vec<u32>,
}

impl PGroup {
    pub fn new(p: u64, exponents: Vec<u32>) -> R<PGroup> {
        if p > u32::MAX as u64 || !is_prime(p as u32) {
            return Err(PGroupError::NotPrime(p));
        }
        if exponents.contains(&0) {
            return Err(PGroupError::ZeroExponent);
        }
        Ok(PGroup { p, exponents })
    }
    pub fn trivial(p: u64) -> PGroup {
        PGroup { p, exponents: vec![] }
    }
    pub fn cyclic(p: u64, e: u32) -> R<PGroup> {
        PGroup::new(p, vec![e])
    }
    /// Sorted exponents.
    pub fn canonical(&self) -> Vec<u32> {
        let mut e = self.exponents.clone();
        e.sort_unstable();
        e
    }
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
    /// `log_p` of the order.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }
    pub fn max_exponent(&self) -> u32 {
        self.exponents.iter().copied().max().unwrap_or(0)
    }
    pub fn is_isomorphic(&self, o: &PGroup) -> bool {
        self.p == o.p && self.canonical() == o.canonical()
    }
    pub fn direct_sum(&self, o: &PGroup) -> PGroup {
        let mut e = self.exponents.clone();
        e.extend(&o.exponents);
        PGroup { p: self.p, exponents: e }
    }
}

impl fmt::Display for PGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.canonical().iter().map(|e| format!("Z/{}^{}", self.p, e)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn pow(p: u64, e: u32) -> R<i128> {
    let mut r: i128 = 1;
    for _ in 0..e {
        r = r.checked_mul(p as i128).filter(|v| *v < (1i128 << 62)).ok_or(PGroupError::Overflow(p, e))?;
    }
    Ok(r)
}

fn valuation(mut x: i128, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, m, a.rem_euclid(m));
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    debug_assert_eq!(r, 1, "not a unit");
    t.rem_euclid(m)
}

/// Valuations of the Smith invariant factors of an integer matrix over
/// `Z/p^n`; a zero factor reports `n`. Pivots are chosen by smallest
/// valuation, first in row-major order.
pub fn snf_valuations(rows: &[Vec<i128>], p: u64, n: u32) -> R<Vec<u32>> {
    let q = pow(p, n)?;
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(q)).collect()).collect();
    let (nr, nc) = (a.len(), a.first().map_or(0, |r| r.len()));
    let mut out = Vec::new();
    for k in 0..nr.min(nc) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, &x) in row.iter().enumerate().skip(k) {
                let v = valuation(x, p, n);
                if v < n && best.map_or(true, |b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else {
            out.extend(std::iter::repeat(n).take(nr.min(nc) - k));
            break;
        };
        a.swap(k, i);
        for row in a.iter_mut() {
            row.swap(k, j);
        }
        let pv = pow(p, v)?;
        let unit = a[k][k] / pv;
        let uinv = inv_mod(unit, q);
        for i in 0..nr {
            if i != k && a[i][k] != 0 {
                let f = (a[i][k] / pv % q * uinv).rem_euclid(q);
                for j in k..nc {
                    a[i][j] = (a[i][j] - f * a[k][j]).rem_euclid(q);
                }
            }
        }
        for j in k + 1..nc {
            if a[k][j] != 0 {
                let f = (a[k][j] / pv % q * uinv).rem_euclid(q);
                for row in a.iter_mut() {
                    row[j] = (row[j] - f * row[k]).rem_euclid(q);
                }
            }
        }
        out.push(v);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PGroupMap {
    pub source: PGroup,
    pub target: PGroup,
    /// `target.rank() x source.rank()`.
    pub matrix: Vec<Vec<i64>>,
}

impl PGroupMap {
    pub fn new(source: &PGroup, target: &PGroup, matrix: Vec<Vec<i64>>) -> R<PGroupMap> {
        let (r, c) = (target.rank(), source.rank());
        if matrix.len() != r || matrix.iter().any(|row| row.len() != c) {
            return Err(PGroupError::Shape(matrix.len(), matrix.first().map_or(0, |x| x.len()), r, c));
        }
        let mut m = matrix;
        for (i, row) in m.iter_mut().enumerate() {
            let q = pow(target.p, target.exponents[i])?;
            for (j, x) in row.iter_mut().enumerate() {
                let v = (*x as i128).rem_euclid(q);
                // p^{a_j} · x must vanish mod p^{b_i}
                let need = target.exponents[i].saturating_sub(source.exponents[j]);
                if valuation(v, target.p, target.exponents[i]) < need {
                    return Err(PGroupError::NotWellDefined(i, j));
                }
                *x = v as i64;
            }
        }
        Ok(PGroupMap { source: source.clone(), target: target.clone(), matrix: m })
    }

    pub fn identity(g: &PGroup) -> PGroupMap {
        let n = g.rank();
        let matrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        PGroupMap { source: g.clone(), target: g.clone(), matrix }
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &PGroupMap) -> R<PGroupMap> {
        if self.target != g.source {
            return Err(PGroupError::NotComposable);
        }
        let (r, c, k) = (g.target.rank(), self.source.rank(), self.target.rank());
        let mut m = vec![vec![0i64; c]; r];
        for i in 0..r {
            let q = pow(g.target.p, g.target.exponents[i])?;
            for j in 0..c {
                let mut acc: i128 = 0;
                for t in 0..k {
                    acc = (acc + g.matrix[i][t] as i128 * self.matrix[t][j] as i128).rem_euclid(q);
                }
                m[i][j] = acc as i64;
            }
        }
        PGroupMap::new(&self.source, &g.target, m)
    }

    fn relation_matrix(&self) -> Vec<Vec<i128>> {
        // generators of the image together with the relations of the target
        let r = self.target.rank();
        (0..r)
            .map(|i| {
                let mut row: Vec<i128> = self.matrix[i].iter().map(|&x| x as i128).collect();
                for k in 0..r {
                    row.push(if k == i { pow(self.target.p, self.target.exponents[i]).unwrap_or(0) } else { 0 });
                }
                row
            })
            .collect()
    }

    /// The cokernel as a p-group.
    pub fn cokernel(&self) -> R<PGroup> {
        let n = self.target.max_exponent() + 1;
        let vals = snf_valuations(&self.relation_matrix(), self.target.p, n)?;
        Ok(PGroup { p: self.target.p, exponents: vals.into_iter().filter(|&v| v > 0).collect() })
    }

    /// `log_p` of the order of the image.
    pub fn image_log_order(&self) -> R<u32> {
        Ok(self.target.log_order() - self.cokernel()?.log_order())
    }

    pub fn is_injective(&self) -> R<bool> {
        Ok(self.image_log_order()? == self.source.log_order())
    }

    /// Whether `p^k` kills the image.
    pub fn image_killed_by(&self, k: u32) -> R<bool> {
        for (i, row) in self.matrix.iter().enumerate() {
            let e = self.target.exponents[i];
            for &x in row {
                if x != 0 && valuation(x as i128, self.target.p, e) + k < e {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn direct_sum(&self, o: &PGroupMap) -> PGroupMap {
        let (r1, c1, r2, c2) = (self.target.rank(), self.source.rank(), o.target.rank(), o.source.rank());
        let mut m = vec![vec![0i64; c1 + c2]; r1 + r2];
        for i in 0..r1 {
            m[i][..c1].copy_from_slice(&self.matrix[i]);
        }
        for i in 0..r2 {
            m[r1 + i][c1..].copy_from_slice(&o.matrix[i]);
        }
        PGroupMap { source: self.source.direct_sum(&o.source), target: self.target.direct_sum(&o.target), matrix: m }
    }
}

/// `⊕ Z/p^{e}` together with a number of Prüfer factors `Z(p^∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtinianType {
    pub p: u64,
    pub finite_exponents: Vec<u32>,
    pub pruefer_count: usize,
}

impl ArtinianType {
    pub fn new(p: u64, mut finite_exponents: Vec<u32>, pruefer_count: usize) -> R<ArtinianType> {
        PGroup::new(p, finite_exponents.clone())?;
        finite_exponents.sort_unstable();
        Ok(ArtinianType { p, finite_exponents, pruefer_count })
    }
    pub fn finite(g: &PGroup) -> ArtinianType {
        ArtinianType { p: g.p, finite_exponents: g.canonical(), pruefer_count: 0 }
    }
}

impl fmt::Display for ArtinianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite_exponents.iter().map(|e| format!("Z/{}^{}", self.p, e)).collect();
        if self.pruefer_count > 0 {
            parts.push(format!("Z({}^inf)^{}", self.p, self.pruefer_count));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `soc^i G = ⊕ Z/p^{min(i, e)}` for `i = 0..=n`, each with its inclusion into `G`.
pub fn socle_series_pg(g: &PGroup, n: u32) -> Vec<(PGroup, PGroupMap)> {
    (0..=n).map(|i| socle_level(g, i)).collect()
}

fn socle_level(g: &PGroup, i: u32) -> (PGroup, PGroupMap) {
    let exps: Vec<u32> = g.exponents.iter().map(|&e| e.min(i)).collect();
    let nz: Vec<usize> = (0..exps.len()).filter(|&k| exps[k] > 0).collect();
    let s = PGroup { p: g.p, exponents: nz.iter().map(|&k| exps[k]).collect() };
    let mut m = vec![vec![0i64; nz.len()]; g.rank()];
    for (c, &k) in nz.iter().enumerate() {
        m[k][c] = (g.p as i64).pow(g.exponents[k] - exps[k]);
    }
    let incl = PGroupMap { source: s.clone(), target: g.clone(), matrix: m };
    (s, incl)
}

// ------------------------------------------------------------ sequences

/// Sequences of injections given by generator rules.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum PSeq {
    /// `0 -> Z/p -> Z/p^2 -> …` by multiplication by `p`; `X_i = Z/p^i`.
    CanonicalPruefer(u64),
    Constant(PGroup),
    /// A finite chain of maps followed by the identity on its last target.
    EventuallyConstant(Vec<PGroupMap>),
    DirectSum(Box<PSeq>, Box<PSeq>),
    /// The socle series of an artinian group.
    SocleSeries(ArtinianType),
    /// `i -> X_{a i + b}`.
    Reindexed(Box<PSeq>, usize, usize),
    /// `(Z/p)^{i+1}` with inclusions; its socle never stabilizes.
    GrowingRank(u64),
    /// Raw prefix with no statement about the tail.
    Prefix(Vec<PGroupMap>),
}

/// What a rule guarantees about its tail: from `from` on, exactly `pruefer`
/// of the sorted exponents increase strictly at every step and the others
/// stay equal to `finite`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Growth {
    pub from: usize,
    pub pruefer: usize,
    pub finite: Vec<u32>,
}

impl PSeq {
    fn p(&self) -> u64 {
        match self {
            PSeq::CanonicalPruefer(p) | PSeq::GrowingRank(p) => *p,
            PSeq::Constant(g) => g.p,
            PSeq::EventuallyConstant(m) | PSeq::Prefix(m) => m.first().map_or(2, |f| f.source.p),
            PSeq::DirectSum(a, _) | PSeq::Reindexed(a, _, _) => a.p(),
            PSeq::SocleSeries(t) => t.p,
        }
    }

    /// Number of terms available, `None` for infinite rules.
    pub fn length(&self) -> Option<usize> {
        match self {
            PSeq::Prefix(m) => Some(m.len() + 1),
            PSeq::DirectSum(a, b) => match (a.length(), b.length()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            },
            PSeq::Reindexed(a, m, k) => a.length().map(|l| if l > *k { (l - 1 - k) / m + 1 } else { 0 }),
            _ => None,
        }
    }

    pub fn term(&self, i: usize) -> R<PGroup> {
        if let PSeq::Prefix(ms) = self {
            if i > 0 && i == ms.len() {
                return Ok(ms[i - 1].target.clone());
            }
        }
        Ok(self.map(i)?.source)
    }

    /// `X_i -> X_{i+1}`.
    pub fn map(&self, i: usize) -> R<PGroupMap> {
        let p = self.p();
        match self {
            PSeq::CanonicalPruefer(p) => {
                let b = PGroup::cyclic(*p, i as u32 + 1)?;
                if i == 0 {
                    return PGroupMap::new(&PGroup::trivial(*p), &b, vec![vec![]]);
                }
                PGroupMap::new(&PGroup::cyclic(*p, i as u32)?, &b, vec![vec![*p as i64]])
            }
            PSeq::Constant(g) => Ok(PGroupMap::identity(g)),
            PSeq::EventuallyConstant(ms) => match ms.get(i) {
                Some(m) => Ok(m.clone()),
                None => Ok(PGroupMap::identity(&ms.last().map_or(PGroup::trivial(p), |m| m.target.clone()))),
            },
            PSeq::Prefix(ms) => ms.get(i).cloned().ok_or_else(|| PGroupError::HorizonInsufficient(format!("prefix has no map at index {i}"))),
            PSeq::DirectSum(a, b) => Ok(a.map(i)?.direct_sum(&b.map(i)?)),
            PSeq::SocleSeries(t) => {
                let g = artinian_level(t, i as u32 + 1);
                let (_, incl_a) = socle_level(&g, i as u32);
                Ok(incl_a)
            }
            PSeq::Reindexed(a, m, k) => {
                let (s, e) = (m * i + k, m * (i + 1) + k);
                let mut f = PGroupMap::identity(&a.term(s)?);
                for t in s..e {
                    f = f.then(&a.map(t)?)?;
                }
                Ok(f)
            }
            PSeq::GrowingRank(p) => {
                let a = PGroup::new(*p, vec![1; i + 1])?;
                let b = PGroup::new(*p, vec![1; i + 2])?;
                let m = (0..i + 2).map(|r| (0..i + 1).map(|c| i64::from(r == c)).collect()).collect();
                PGroupMap::new(&a, &b, m)
            }
        }
    }

    /// Tail guarantee, if the rule provides one.
    pub fn growth(&self) -> R<Option<Growth>> {
        Ok(match self {
            PSeq::CanonicalPruefer(_) => Some(Growth { from: 1, pruefer: 1, finite: vec![] }),
            PSeq::Constant(g) => Some(Growth { from: 0, pruefer: 0, finite: g.canonical() }),
            PSeq::EventuallyConstant(ms) => {
                let last = ms.last().map_or(PGroup::trivial(self.p()), |m| m.target.clone());
                Some(Growth { from: ms.len(), pruefer: 0, finite: last.canonical() })
            }
            PSeq::SocleSeries(t) => {
                let top = t.finite_exponents.iter().copied().max().unwrap_or(0) as usize;
                Some(Growth { from: top + 1, pruefer: t.pruefer_count, finite: t.finite_exponents.clone() })
            }
            PSeq::DirectSum(a, b) => match (a.growth()?, b.growth()?) {
                (Some(x), Some(y)) => {
                    let mut finite = x.finite.clone();
                    finite.extend(&y.finite);
                    finite.sort_unstable();
                    // growing exponents exceed every finite one after this many more steps
                    let top = finite.iter().copied().max().unwrap_or(0) as usize;
                    let pad = if x.pruefer + y.pruefer > 0 { top } else { 0 };
                    Some(Growth { from: x.from.max(y.from) + pad, pruefer: x.pruefer + y.pruefer, finite })
                }
                _ => None,
            },
            PSeq::Reindexed(a, m, k) => a.growth()?.map(|g| Growth {
                from: if g.from > *k { (g.from - k).div_ceil(*m) } else { 0 },
                ..g
            }),
            PSeq::GrowingRank(_) | PSeq::Prefix(_) => None,
        })
    }
}

// soc^i of an artinian type, as a finite group: Z/p^{min(i,e)} and (Z/p^i)^P
fn artinian_level(t: &ArtinianType, i: u32) -> PGroup {
    let mut e: Vec<u32> = t.finite_exponents.iter().map(|&x| x.min(i)).filter(|&x| x > 0).collect();
    if i > 0 {
        e.extend(std::iter::repeat(i).take(t.pruefer_count));
    }
    PGroup { p: t.p, exponents: e }
}

/// Checks that `X_i -> X_j` identifies `X_i` with `soc^i X_j` for `i ≤ j ≤ horizon`.
pub fn is_socle_stable(seq: &PSeq, horizon: usize) -> R<bool> {
    let n = seq.length().map_or(horizon, |l| horizon.min(l.saturating_sub(1)));
    for i in 0..n {
        if !seq.map(i)?.is_injective()? {
            return Err(PGroupError::NotInjective(i));
        }
    }
    for i in 0..=n {
        let xi = seq.term(i)?;
        let mut f = PGroupMap::identity(&xi);
        for j in i..=n {
            if j > i {
                f = f.then(&seq.map(j - 1)?)?;
            }
            let xj = &f.target;
            let soc_order: u32 = xj.exponents.iter().map(|&e| e.min(i as u32)).sum();
            if !f.image_killed_by(i as u32)? || xi.log_order() != soc_order {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub colimit: ArtinianType,
    pub cauchy_index: usize,
    pub checked_to: usize,
}

/// Colimit of an injective Cauchy sequence, certified by the rule's growth data.
pub fn classify_colimit(seq: &PSeq, horizon: usize) -> R<Classification> {
    let last = seq.length().map_or(horizon, |l| horizon.min(l.saturating_sub(1)));
    let mut ranks = Vec::new();
    let mut exps = Vec::new();
    for i in 0..=last {
        let g = seq.term(i)?;
        ranks.push(g.rank());
        exps.push(g.canonical());
        if i < last && !seq.map(i)?.is_injective()? {
            return Err(PGroupError::NotInjective(i));
        }
    }
    // socle dimension = rank; Hom(Z/p, -) bijective iff ranks agree
    let mut cauchy = last;
    while cauchy > 0 && ranks[cauchy - 1] == ranks[last] {
        cauchy -= 1;
    }
    let growth = match seq.growth()? {
        Some(g) => g,
        None => {
            if last > 0 && ranks[last - 1] != ranks[last] {
                return Err(PGroupError::NotCauchy(last - 1));
            }
            return Err(PGroupError::HorizonInsufficient("no growth certificate for this rule".into()));
        }
    };
    if growth.from + 1 > last {
        return Err(PGroupError::HorizonInsufficient(format!("certificate starts at {}, horizon {last}", growth.from)));
    }
    if cauchy > growth.from {
        return Err(PGroupError::NotCauchy(cauchy - 1));
    }
    let pr = growth.pruefer;
    for i in growth.from..=last {
        let e = &exps[i];
        if e.len() < pr || e[..e.len() - pr] != growth.finite[..] {
            return Err(PGroupError::HorizonInsufficient(format!("finite part differs from the certificate at index {i}")));
        }
        if i > growth.from {
            let prev = &exps[i - 1];
            let (a, b) = (&prev[prev.len() - pr..], &e[e.len() - pr..]);
            if a.iter().zip(b).any(|(x, y)| y <= x) {
                return Err(PGroupError::HorizonInsufficient(format!("growing exponents stall at index {i}")));
            }
        }
    }
    Ok(Classification {
        colimit: ArtinianType { p: seq.p(), finite_exponents: growth.finite, pruefer_count: pr },
        cauchy_index: cauchy,
        checked_to: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_of_diagonal_and_mixed() {
        let v = snf_valuations(&[vec![4, 0], vec![0, 2]], 2, 4).unwrap();
        let mut v = v;
        v.sort();
        assert_eq!(v, vec![1, 2]);
        // [[2, 4], [4, 8]] has rank one over Z_(2)
        let v = snf_valuations(&[vec![2, 4], vec![4, 8]], 2, 5).unwrap();
        assert_eq!(v, vec![1, 5]);
    }

    #[test]
    fn multiplication_by_p_is_injective_into_next_cyclic() {
        let a = PGroup::cyclic(3, 1).unwrap();
        let b = PGroup::cyclic(3, 2).unwrap();
        assert!(PGroupMap::new(&a, &b, vec![vec![3]]).unwrap().is_injective().unwrap());
        assert!(PGroupMap::new(&a, &b, vec![vec![1]]).is_err());
        let c = PGroupMap::new(&b, &a, vec![vec![1]]).unwrap();
        assert!(!c.is_injective().unwrap());
        assert_eq!(c.cokernel().unwrap().exponents, Vec::<u32>::new());
    }
}

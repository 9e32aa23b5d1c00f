//! Non-crossing partitions, the Kreweras complement and free cumulants.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::measure::Measure;

/// Largest `p` accepted by [`enumerate_nc`].
pub const MAX_P: usize = 14;

/// A non-crossing partition of `{1..p}`, stored as a restricted growth string
/// (`labels[i]` is the block of element `i + 1`, blocks numbered in order of
/// their smallest element).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NcPartition {
    labels: Vec<u8>,
}

impl NcPartition {
    /// Validates a list of blocks of `{1..p}`.
    pub fn from_blocks(p: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![u8::MAX; p];
        let mut sorted: Vec<Vec<usize>> = blocks.to_vec();
        for b in &mut sorted {
            b.sort_unstable();
        }
        sorted.retain(|b| !b.is_empty());
        sorted.sort_by_key(|b| b[0]);
        if sorted.len() > u8::MAX as usize {
            return Err(Error::TooLarge(p));
        }
        for (k, b) in sorted.iter().enumerate() {
            for &i in b {
                if i == 0 || i > p || labels[i - 1] != u8::MAX {
                    return Err(Error::InvalidParams(format!("blocks do not partition 1..{p}")));
                }
                labels[i - 1] = k as u8;
            }
        }
        if labels.contains(&u8::MAX) {
            return Err(Error::InvalidParams(format!("blocks do not cover 1..{p}")));
        }
        if is_crossing(&labels) {
            return Err(Error::InvalidParams("partition is crossing".into()));
        }
        Ok(NcPartition { labels })
    }

    pub fn p(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Blocks as sorted lists of 1-based elements.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]; self.len()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i + 1);
        }
        out
    }

    /// Sorted block sizes.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks().iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }

    /// The partition into singletons.
    pub fn zero(p: usize) -> Self {
        NcPartition {
            labels: (0..p).map(|i| i as u8).collect(),
        }
    }

    /// The one-block partition.
    pub fn one(p: usize) -> Self {
        NcPartition { labels: vec![0; p] }
    }

    fn from_labels(raw: &[usize]) -> Self {
        let mut map = HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let n = map.len();
                *map.entry(*l).or_insert(n) as u8
            })
            .collect();
        NcPartition { labels }
    }
}

/// Whether a labelling has `a < b < c < d` with `a, c` in one block and
/// `b, d` in another.
pub fn is_crossing(labels: &[u8]) -> bool {
    let n = labels.len();
    for a in 0..n {
        for b in a + 1..n {
            if labels[b] == labels[a] {
                continue;
            }
            for c in b + 1..n {
                if labels[c] != labels[a] {
                    continue;
                }
                if labels[c + 1..].contains(&labels[b]) {
                    return true;
                }
            }
        }
    }
    false
}

pub fn catalan(p: usize) -> u64 {
    let mut c: u64 = 1;
    for k in 0..p as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

type Labels = Vec<u8>;

/// All non-crossing labellings of `n` consecutive points, memoized by `n`.
fn nc_labels(n: usize, memo: &mut Vec<Option<Arc<Vec<Labels>>>>) -> Arc<Vec<Labels>> {
    if let Some(v) = &memo[n] {
        return v.clone();
    }
    let out: Vec<Labels> = if n == 0 {
        vec![vec![]]
    } else {
        let mut out = vec![];
        // The first point either is a singleton or joins the block of the
        // point `j`, which splits off the independent interval `1..j`.
        for j in 1..=n {
            let inner = nc_labels(j - 1, memo);
            if j == n {
                for r in inner.iter() {
                    let mut l = Vec::with_capacity(n);
                    l.push(0);
                    l.extend(r.iter().map(|x| x + 1));
                    out.push(l);
                }
                continue;
            }
            let outer = nc_labels(n - j, memo);
            for r in inner.iter() {
                let shift = r.iter().map(|&x| x + 1).max().unwrap_or(0);
                for o in outer.iter() {
                    let mut l = Vec::with_capacity(n);
                    l.push(0);
                    l.extend(r.iter().map(|x| x + 1));
                    l.extend(o.iter().map(|&x| if x == 0 { 0 } else { x + shift }));
                    out.push(l);
                }
            }
        }
        out
    };
    let out = Arc::new(out);
    memo[n] = Some(out.clone());
    out
}

/// Every non-crossing partition of `{1..p}`.
pub fn enumerate_nc(p: usize) -> Result<Vec<NcPartition>> {
    if p == 0 || p > MAX_P {
        return Err(Error::TooLarge(p));
    }
    let mut memo = vec![None; p + 1];
    let all = nc_labels(p, &mut memo);
    Ok(all
        .iter()
        .map(|l| NcPartition::from_labels(&l.iter().map(|&x| x as usize).collect::<Vec<_>>()))
        .collect())
}

/// Kreweras complement, computed as the cycles of `π⁻¹γ` with `γ = (1 2 … p)`
/// and `π` the permutation sending each element to the next one of its block.
pub fn kreweras(pi: &NcPartition) -> NcPartition {
    let p = pi.p();
    let mut prev = vec![0usize; p];
    for b in pi.blocks() {
        for (k, &i) in b.iter().enumerate() {
            let j = b[(k + 1) % b.len()];
            prev[j - 1] = i - 1;
        }
    }
    let sigma: Vec<usize> = (0..p).map(|i| prev[(i + 1) % p]).collect();
    let mut raw = vec![usize::MAX; p];
    let mut label = 0;
    for s in 0..p {
        if raw[s] != usize::MAX {
            continue;
        }
        let mut i = s;
        while raw[i] == usize::MAX {
            raw[i] = label;
            i = sigma[i];
        }
        label += 1;
    }
    NcPartition::from_labels(&raw)
}

/// Coefficient ring for the moment–cumulant recursions.
pub trait Scalar: Clone + Zero + One + std::ops::Sub<Output = Self> {}
impl Scalar for f64 {}
impl Scalar for BigRational {}

/// Free cumulants `κ₁..κ_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantVector<T = f64> {
    pub kappa: Vec<T>,
}

impl<T> CumulantVector<T> {
    pub fn p(&self) -> usize {
        self.kappa.len()
    }
}

/// `[x^0..x^p]` of the power series `m(x)^s` with `m = 1 + Σ m_i x^i`.
fn series_powers<T: Scalar>(moments: &[T], p: usize) -> Vec<Vec<T>> {
    let mut base = vec![T::zero(); p + 1];
    base[0] = T::one();
    for (i, m) in moments.iter().enumerate().take(p) {
        base[i + 1] = m.clone();
    }
    let mut out = vec![vec![T::zero(); p + 1]];
    out[0][0] = T::one();
    for s in 1..=p {
        let prev = &out[s - 1];
        let mut cur = vec![T::zero(); p + 1];
        for (i, a) in prev.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in base.iter().enumerate().take(p + 1 - i) {
                cur[i + j] = cur[i + j].clone() + a.clone() * b.clone();
            }
        }
        out.push(cur);
    }
    out
}

/// `m_n = Σ_s κ_s [x^{n−s}] m(x)^s`, equivalent to summing `∏ κ_{|V|}` over
/// `NC(n)`.
pub fn cumulants_to_moments<T: Scalar>(kappa: &CumulantVector<T>) -> Vec<T> {
    let p = kappa.p();
    let mut m: Vec<T> = Vec::with_capacity(p);
    for n in 1..=p {
        let pw = series_powers(&m, n);
        let mut v = T::zero();
        for s in 1..=n {
            v = v + kappa.kappa[s - 1].clone() * pw[s][n - s].clone();
        }
        m.push(v);
    }
    m
}

/// Inverse of [`cumulants_to_moments`].
pub fn moments_to_cumulants<T: Scalar>(moments: &[T]) -> CumulantVector<T> {
    let p = moments.len();
    let mut kappa: Vec<T> = Vec::with_capacity(p);
    for n in 1..=p {
        let pw = series_powers(&moments[..n - 1], n);
        let mut v = moments[n - 1].clone();
        for s in 1..n {
            v = v - kappa[s - 1].clone() * pw[s][n - s].clone();
        }
        kappa.push(v);
    }
    CumulantVector { kappa }
}

/// `Σ_{π∈NC(p)} ∏_{V∈π} κ_{|V|}` by explicit enumeration.
pub fn nc_moment_sum(kappa: &[f64], p: usize) -> Result<f64> {
    Ok(enumerate_nc(p)?
        .iter()
        .map(|pi| pi.block_sizes().iter().map(|&s| kappa[s - 1]).product::<f64>())
        .sum())
}

/// `(block sizes of π, block sizes of Kr(π), multiplicity)` over `NC(p)`.
type KrewerasTable = Arc<Vec<(Vec<usize>, Vec<usize>, f64)>>;

fn kreweras_table(p: usize) -> Result<KrewerasTable> {
    static CACHE: OnceLock<Mutex<HashMap<usize, KrewerasTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("kreweras cache").get(&p) {
        return Ok(t.clone());
    }
    let mut counts: HashMap<(Vec<usize>, Vec<usize>), f64> = HashMap::new();
    for pi in enumerate_nc(p)? {
        let key = (pi.block_sizes(), kreweras(&pi).block_sizes());
        *counts.entry(key).or_insert(0.0) += 1.0;
    }
    let mut t: Vec<_> = counts.into_iter().map(|((a, b), c)| (a, b, c)).collect();
    t.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    let t = Arc::new(t);
    cache.lock().expect("kreweras cache").insert(p, t.clone());
    Ok(t)
}

/// `κ_p(AB)` for free `A`, `B`: `Σ_{π∈NC(p)} κ_π(A) κ_{Kr(π)}(B)`.
pub fn product_cumulants(kappa_a: &[f64], kappa_b: &[f64], p: usize) -> Result<f64> {
    if kappa_a.len() < p || kappa_b.len() < p {
        return Err(Error::InvalidParams(format!("need {p} cumulants")));
    }
    let t = kreweras_table(p)?;
    Ok(t.iter()
        .map(|(sa, sb, c)| {
            c * sa.iter().map(|&s| kappa_a[s - 1]).product::<f64>()
                * sb.iter().map(|&s| kappa_b[s - 1]).product::<f64>()
        })
        .sum())
}

/// Free cumulants `κ₁..κ_p` of `μ^⊠n`, by iterating [`product_cumulants`].
pub fn mult_power_cumulants_from(kappa: &[f64], n: usize, p: usize) -> Result<CumulantVector> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    if kappa.len() < p {
        return Err(Error::InvalidParams(format!("need {p} cumulants")));
    }
    let mut cur = kappa[..p].to_vec();
    for _ in 1..n {
        cur = (1..=p)
            .map(|m| product_cumulants(kappa, &cur, m))
            .collect::<Result<_>>()?;
    }
    Ok(CumulantVector { kappa: cur })
}

/// Free cumulants of `μ^⊠n` from the moments of `μ`.
pub fn mult_power_cumulants(mu: &Measure, n: usize, p: usize) -> Result<CumulantVector> {
    if p == 0 || p > 10 {
        return Err(Error::TooLarge(p));
    }
    let moments = (1..=p)
        .map(|k| {
            let m = mu.moment(k as f64)?;
            if m.is_finite() {
                Ok(m)
            } else {
                Err(Error::DivergentIntegral(format!("moment {k} is infinite")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    mult_power_cumulants_from(&moments_to_cumulants(&moments).kappa, n, p)
}

/// Both sides of `Σ_{r=1}^{p−1} r^{r−1}/r! · (p−r)^{p−r}/(p−r)! = (p−1)p^{p−1}/p!`
/// in exact rational arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelIdentity {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl AbelIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

fn pow(b: usize, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(b), e)
}

pub fn abel_identity(p: usize) -> Result<AbelIdentity> {
    if p < 2 {
        return Err(Error::InvalidParams("abel identity needs p >= 2".into()));
    }
    let mut lhs = BigRational::zero();
    for r in 1..p {
        let num = pow(r, r - 1) * pow(p - r, p - r);
        let den = factorial(r) * factorial(p - r);
        lhs += BigRational::new(num, den);
    }
    let rhs = BigRational::new(BigInt::from(p - 1) * pow(p, p - 1), factorial(p));
    Ok(AbelIdentity { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// All set partitions of `{1..p}` as restricted growth strings.
    fn all_set_partitions(p: usize) -> Vec<Vec<u8>> {
        fn rec(i: usize, p: usize, cur: &mut Vec<u8>, max: u8, out: &mut Vec<Vec<u8>>) {
            if i == p {
                out.push(cur.clone());
                return;
            }
            for l in 0..=max + 1 {
                if i == 0 && l > 0 {
                    break;
                }
                cur.push(l);
                rec(i + 1, p, cur, if i == 0 { 0 } else { max.max(l) }, out);
                cur.pop();
            }
        }
        let mut out = vec![];
        rec(0, p, &mut vec![], 0, &mut out);
        out
    }

    #[test]
    fn counts_are_catalan() {
        assert_eq!(enumerate_nc(1).unwrap(), vec![NcPartition::one(1)]);
        for p in 1..=10 {
            let all = enumerate_nc(p).unwrap();
            assert_eq!(all.len() as u64, catalan(p), "p = {p}");
            let set: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(set.len(), all.len());
            assert!(all.iter().all(|pi| !is_crossing(pi.labels())));
        }
        assert!(matches!(enumerate_nc(15), Err(Error::TooLarge(15))));
    }

    #[test]
    fn brute_force_matches_for_four_points() {
        let all = all_set_partitions(4);
        assert_eq!(all.len(), 15);
        let crossing: Vec<_> = all.iter().filter(|l| is_crossing(l)).collect();
        assert_eq!(crossing, vec![&vec![0u8, 1, 0, 1]]);
        for p in 1..=7 {
            let nc = all_set_partitions(p).into_iter().filter(|l| !is_crossing(l)).count();
            assert_eq!(nc as u64, catalan(p));
        }
    }

    #[test]
    fn kreweras_extremes_and_sizes() {
        for p in 1..=8 {
            assert_eq!(kreweras(&NcPartition::zero(p)), NcPartition::one(p));
            assert_eq!(kreweras(&NcPartition::one(p)), NcPartition::zero(p));
            for pi in enumerate_nc(p).unwrap() {
                let k = kreweras(&pi);
                assert!(!is_crossing(k.labels()));
                assert_eq!(pi.len() + k.len(), p + 1);
            }
        }
    }

    #[test]
    fn kreweras_of_a_pair() {
        let pi = NcPartition::from_blocks(4, &[vec![1, 2], vec![3], vec![4]]).unwrap();
        // Barred points 1̄..4̄ sit after 1..4; 2̄, 3̄, 4̄ are joined and 1̄ is alone.
        assert_eq!(kreweras(&pi).blocks(), vec![vec![1], vec![2, 3, 4]]);
        assert!(NcPartition::from_blocks(4, &[vec![1, 3], vec![2, 4]]).is_err());
    }

    #[test]
    fn semicircle_and_free_poisson() {
        let m = cumulants_to_moments(&CumulantVector {
            kappa: vec![0.0, 1.0, 0.0, 0.0],
        });
        assert_eq!(m, vec![0.0, 1.0, 0.0, 2.0]);
        let l = 0.7;
        let m = cumulants_to_moments(&CumulantVector { kappa: vec![l; 2] });
        assert!((m[0] - l).abs() < 1e-15 && (m[1] - l - l * l).abs() < 1e-15);
    }

    #[test]
    fn recursion_matches_partition_sum() {
        let kappa = [0.3, -1.1, 0.7, 2.0, 0.25, -0.5, 1.5, 0.1];
        let m = cumulants_to_moments(&CumulantVector { kappa: kappa.to_vec() });
        for p in 1..=8 {
            let s = nc_moment_sum(&kappa, p).unwrap();
            assert!((m[p - 1] - s).abs() < 1e-10 * s.abs().max(1.0), "{p}");
        }
    }

    #[test]
    fn exact_rational_round_trip() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let k = vec![q(1, 2), q(-3, 7), q(5, 3), q(2, 1), q(-1, 9)];
        let m = cumulants_to_moments(&CumulantVector { kappa: k.clone() });
        assert_eq!(moments_to_cumulants(&m).kappa, k);
    }

    #[test]
    fn product_with_identity_and_first_order() {
        let ka = [0.5, 1.2, -0.3, 0.8, 2.0];
        let one = [1.0, 0.0, 0.0, 0.0, 0.0];
        for p in 1..=5 {
            assert!((product_cumulants(&ka, &one, p).unwrap() - ka[p - 1]).abs() < 1e-14);
        }
        let kb = [3.0, 1.0, 1.0];
        assert_eq!(product_cumulants(&ka, &kb, 1).unwrap(), 1.5);
    }

    #[test]
    fn abel_small_cases() {
        let one = BigRational::one();
        let a = abel_identity(2).unwrap();
        assert_eq!((a.lhs.clone(), a.rhs.clone()), (one.clone(), one));
        let a = abel_identity(3).unwrap();
        assert_eq!(a.lhs, BigRational::from_integer(3.into()));
        assert!(a.holds());
        for p in 2..=20 {
            assert!(abel_identity(p).unwrap().holds(), "{p}");
        }
    }

    #[test]
    fn second_cumulant_of_power() {
        let kappa = [1.0; 4];
        for n in 1..=8 {
            let k = mult_power_cumulants_from(&kappa, n, 2).unwrap();
            assert!((k.kappa[1] - n as f64).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn moment_cumulant_round_trip(k in proptest::collection::vec(-2.0f64..2.0, 1..=10)) {
            let m = cumulants_to_moments(&CumulantVector { kappa: k.clone() });
            let back = moments_to_cumulants(&m);
            for (a, b) in back.kappa.iter().zip(&k) {
                let scale = m.iter().fold(1.0f64, |s, x| s.max(x.abs()));
                prop_assert!((a - b).abs() < 1e-10 * scale);
            }
        }
    }
}

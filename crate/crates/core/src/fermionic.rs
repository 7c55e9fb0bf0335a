//! Fermionic counting: the numbers R(nu, N) and K(nu, N), vacancy numbers,
//! pattern enumeration, weight-multiplicity sums, and the series they
//! generate under the specialization w_m^(a) = y_a^m.
//!
//! For a quantum space datum nu and a string pattern N, both finitely
//! supported maps (color, m) -> Z>=0,
//!
//! ```text
//! gamma_m^(a) = sum_k min(m,k) nu_k^(a)
//! P_m^(a)     = gamma_m^(a) - sum_{(b,k)} (alpha_a|alpha_b) min(t_b m, t_a k) N_k^(b)
//! F_{am,bk}   = delta delta P_m^(a) + (alpha_a|alpha_b) min(t_b m, t_a k) N_k^(b)
//! R(nu,N)     = det_{H'} F * prod_{H'} (1/N_m^(a)) C(P_m^(a)+N_m^(a)-1, N_m^(a)-1)
//! K(nu,N)     = prod C(P_m^(a)+N_m^(a), N_m^(a))
//! ```
//!
//! with R(nu,0) = 1.  R is always an integer, which the code asserts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cartan::{CartanData, Rat, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::{binomial_int, det_i64};
use crate::qsystem::{Mode, QTable};
use crate::series::{TruncatedSeries, TruncationSpec};

/// Finitely supported map (color, m) -> nonnegative multiplicity.
/// Used for both quantum space data nu and string patterns N.
#[derive(Clone, PartialEq, Eq, Debug, Default, PartialOrd, Ord)]
pub struct ModeMap {
    entries: BTreeMap<Mode, u64>,
}

impl ModeMap {
    pub fn new() -> Self {
        ModeMap {
            entries: BTreeMap::new(),
        }
    }

    /// Builds from (color, m, mult) triples with zero-based colors.
    pub fn from_triples(triples: &[(usize, u32, u64)]) -> Self {
        let mut map = ModeMap::new();
        for &(a, m, mult) in triples {
            map.add(a, m, mult);
        }
        map
    }

    /// delta_m^(a): the single-mode map.
    pub fn delta(a: usize, m: u32) -> Self {
        Self::from_triples(&[(a, m, 1)])
    }

    pub fn add(&mut self, a: usize, m: u32, mult: u64) {
        if mult == 0 {
            return;
        }
        assert!(m >= 1, "modes have m >= 1");
        *self.entries.entry((a, m)).or_insert(0) += mult;
    }

    pub fn set(&mut self, a: usize, m: u32, mult: u64) {
        if mult == 0 {
            self.entries.remove(&(a, m));
        } else {
            self.entries.insert((a, m), mult);
        }
    }

    pub fn get(&self, a: usize, m: u32) -> u64 {
        self.entries.get(&(a, m)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// The support H'(N) = {(a,m) : N_m^(a) > 0}, in lexicographic order.
    pub fn support(&self) -> Vec<Mode> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mode, u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn sum(&self, other: &ModeMap) -> ModeMap {
        let mut out = self.clone();
        for ((a, m), v) in other.iter() {
            out.add(a, m, v);
        }
        out
    }

    /// Total number of boxes sum_m m * N_m^(a) for one color.
    pub fn weighted_total(&self, a: usize) -> u64 {
        self.iter()
            .filter(|((b, _), _)| *b == a)
            .map(|((_, m), v)| m as u64 * v)
            .sum()
    }

    /// Total count sum N_m^(a) over all modes.
    pub fn total(&self) -> u64 {
        self.iter().map(|(_, v)| v).sum()
    }

    /// Highest weight sum m nu_m^(a) Lambda_a of the associated tensor product.
    pub fn top_weight(&self, c: &CartanData) -> WeightVector {
        let mut w = vec![0i64; c.n];
        for ((a, m), v) in self.iter() {
            w[a] += m as i64 * v as i64;
        }
        WeightVector(w)
    }
}

/// Generalized binomial coefficient with rational top argument.
pub fn gen_binomial(k: &BigRational, j: i64) -> BigRational {
    if j < 0 {
        return BigRational::zero();
    }
    if j == 0 {
        return BigRational::one();
    }
    let mut num = BigRational::one();
    for i in 0..j {
        num *= k - BigRational::from_integer(i.into());
    }
    let mut den = BigInt::one();
    for i in 1..=j {
        den *= BigInt::from(i);
    }
    num / BigRational::from_integer(den)
}

/// Integer form of the generalized binomial coefficient.
pub fn gen_binomial_int(k: i64, j: i64) -> BigInt {
    binomial_int(k, j)
}

/// gamma_m^(a) = sum_k min(m,k) nu_k^(a).
pub fn gamma(nu: &ModeMap, a: usize, m: u32) -> i64 {
    nu.iter()
        .filter(|((b, _), _)| *b == a)
        .map(|((_, k), v)| (m.min(k) as i64) * v as i64)
        .sum()
}

/// (alpha_a|alpha_b) min(t_b m, t_a k), which is always an integer.
fn pairing_min(c: &CartanData, a: usize, m: u32, b: usize, k: u32) -> i64 {
    let v = c.bilinear[a][b] * Rat::from_integer((c.t[b] * m as i64).min(c.t[a] * k as i64));
    debug_assert!(v.is_integer());
    v.to_integer()
}

/// Vacancy number P_m^(a)(nu, N).
pub fn vacancy(c: &CartanData, nu: &ModeMap, n: &ModeMap, a: usize, m: u32) -> Result<i64> {
    let raw: Rat = n
        .iter()
        .map(|((b, k), v)| {
            c.bilinear[a][b]
                * Rat::from_integer(((c.t[b] * m as i64).min(c.t[a] * k as i64)) * v as i64)
        })
        .sum();
    if !raw.is_integer() {
        return Err(Error::NonIntegerVacancy);
    }
    Ok(gamma(nu, a, m) - raw.to_integer())
}

/// Vacancy numbers on a fixed support, with signed nu entries (needed for the
/// subset expansion of R below).
fn vacancy_signed(c: &CartanData, nu: &[(Mode, i64)], n: &[(Mode, i64)], a: usize, m: u32) -> i64 {
    let g: i64 = nu
        .iter()
        .filter(|((b, _), _)| *b == a)
        .map(|&((_, k), v)| (m.min(k) as i64) * v)
        .sum();
    let pair: i64 = n
        .iter()
        .map(|&((b, k), v)| pairing_min(c, a, m, b, k) * v)
        .sum();
    g - pair
}

/// Breakdown of R(nu, N) = det F * prod of binomial factors.
#[derive(Clone, Debug)]
pub struct CountReport {
    pub value: BigInt,
    pub det_f: BigInt,
    pub factors: Vec<BigRational>,
}

/// R(nu, N); the determinant and binomial product are reported separately
/// and the integrality of the result is asserted.
pub fn r_number(c: &CartanData, nu: &ModeMap, n: &ModeMap) -> CountReport {
    if n.is_zero() {
        return CountReport {
            value: BigInt::one(),
            det_f: BigInt::one(),
            factors: Vec::new(),
        };
    }
    let support: Vec<(Mode, u64)> = n.iter().collect();
    let p: Vec<i64> = support
        .iter()
        .map(|&((a, m), _)| vacancy(c, nu, n, a, m).expect("integral vacancy"))
        .collect();
    let det_f = det_f_on_support(c, &support, &p);
    let mut factors = Vec::new();
    let mut numer = det_f.clone();
    let mut denom = BigInt::one();
    for (i, &(_, count)) in support.iter().enumerate() {
        let nm = count as i64;
        let binom = binomial_int(p[i] + nm - 1, nm - 1);
        factors.push(BigRational::new(binom.clone(), BigInt::from(nm)));
        numer *= binom;
        denom *= BigInt::from(nm);
    }
    let (q, r) = num_integer::Integer::div_rem(&numer, &denom);
    assert!(r.is_zero(), "R(nu,N) must be an integer");
    CountReport {
        value: q,
        det_f,
        factors,
    }
}

fn det_f_on_support(c: &CartanData, support: &[(Mode, u64)], p: &[i64]) -> BigInt {
    let s = support.len();
    let mut f = vec![vec![0i64; s]; s];
    for (i, &((a, m), _)) in support.iter().enumerate() {
        for (j, &((b, k), count)) in support.iter().enumerate() {
            let mut entry = pairing_min(c, a, m, b, k) * count as i64;
            if i == j {
                entry += p[i];
            }
            f[i][j] = entry;
        }
    }
    det_i64(&f)
}

/// K(nu, N) = prod C(P_m^(a) + N_m^(a), N_m^(a)); modes off the support
/// contribute a factor one.
pub fn k_number(c: &CartanData, nu: &ModeMap, n: &ModeMap) -> BigInt {
    let mut out = BigInt::one();
    for ((a, m), count) in n.iter() {
        let p = vacancy(c, nu, n, a, m).expect("integral vacancy");
        out *= binomial_int(p + count as i64, count as i64);
        if out.is_zero() {
            break;
        }
    }
    out
}

/// Subset expansion of R(nu, N):
///
/// ```text
/// R(nu,N) = sum_{J subset H'} det_J D * prod C(P[J]+N[J], N[J]),
/// D_{am,bk} = (alpha_a|alpha_b) min(t_b m, t_a k) - delta delta,
/// nu[J]_m^(a) = nu_m^(a) - sum_{(b,k) in J} (alpha_a|alpha_b) B_{bk,am},
/// N[J] = N - indicator(J).
/// ```
///
/// Subsets J not contained in the support contribute a zero binomial.
pub fn r_number_alt(c: &CartanData, nu: &ModeMap, n: &ModeMap) -> BigInt {
    let support = n.support();
    let s = support.len();
    let mut total = BigInt::zero();
    for mask in 0u32..(1 << s) {
        let j_modes: Vec<Mode> = (0..s)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| support[i])
            .collect();
        // D_J
        let d_j = if j_modes.is_empty() {
            BigInt::one()
        } else {
            let sz = j_modes.len();
            let mut d = vec![vec![0i64; sz]; sz];
            for (i, &(a, m)) in j_modes.iter().enumerate() {
                for (jj, &(b, k)) in j_modes.iter().enumerate() {
                    d[i][jj] = pairing_min(c, a, m, b, k) - ((i == jj) as i64);
                }
            }
            det_i64(&d)
        };
        if d_j.is_zero() {
            continue;
        }
        // nu[J] on the union of supp(nu) and the modes shifted by B
        let mut nu_j: BTreeMap<Mode, i64> = nu.iter().map(|(k, v)| (k, v as i64)).collect();
        for &(b, k) in &j_modes {
            for a in 0..c.n {
                // B_{bk,am} is supported on finitely many m
                for m in 1..=(c.t[a] * k as i64 + 2) as u32 {
                    let bc = crate::qsystem::b_coeff(c, b, k, a, m);
                    if bc == 0 {
                        continue;
                    }
                    let shift = c.bilinear[a][b] * Rat::from_integer(bc);
                    debug_assert!(shift.is_integer());
                    *nu_j.entry((a, m)).or_insert(0) -= shift.to_integer();
                }
            }
        }
        // N[J]
        let mut n_j: BTreeMap<Mode, i64> = n.iter().map(|(k, v)| (k, v as i64)).collect();
        let mut negative = false;
        for &mode in &j_modes {
            let e = n_j.entry(mode).or_insert(0);
            *e -= 1;
            if *e < 0 {
                negative = true;
            }
        }
        if negative {
            continue;
        }
        let nu_vec: Vec<(Mode, i64)> = nu_j.into_iter().filter(|(_, v)| *v != 0).collect();
        let n_vec: Vec<(Mode, i64)> = n_j.into_iter().collect();
        let mut term = d_j;
        for &((a, m), count) in &n_vec {
            if count == 0 {
                continue;
            }
            let p = vacancy_signed(c, &nu_vec, &n_vec, a, m);
            term *= binomial_int(p + count, count);
            if term.is_zero() {
                break;
            }
        }
        total += term;
    }
    total
}

/// A partition as (part, multiplicity) pairs with parts strictly decreasing.
pub(crate) type Partition = Vec<(u32, u64)>;

/// All partitions of `d`.  `partitions_of(0)` is the empty partition alone.
pub(crate) fn partitions_of(d: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, current: &mut Partition, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            for count in 1..=(remaining / part) {
                current.push((part, count as u64));
                rec(remaining - part * count, part - 1, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// String patterns N with sum m nu Lambda - sum m N alpha = lambda, i.e.
/// the Cartesian product over colors of the partitions of the coordinates
/// of the root-lattice gap.  Empty when the gap leaves the positive cone.
pub fn enumerate_patterns(c: &CartanData, nu: &ModeMap, lambda: &WeightVector) -> Vec<ModeMap> {
    let gap = nu.top_weight(c).sub(lambda);
    let d = match c.root_coords_integer(&gap) {
        Some(d) if d.iter().all(|&x| x >= 0) => d,
        _ => return Vec::new(),
    };
    let per_color: Vec<Vec<Vec<(u32, u64)>>> =
        d.iter().map(|&da| partitions_of(da as u32)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, ModeMap)> = vec![(0, ModeMap::new())];
    while let Some((color, acc)) = stack.pop() {
        if color == c.n {
            out.push(acc);
            continue;
        }
        for partition in &per_color[color] {
            let mut next = acc.clone();
            for &(m, count) in partition {
                next.add(color, m, count);
            }
            stack.push((color + 1, next));
        }
    }
    out.sort();
    out
}

/// r_lambda^nu = sum over patterns of R(nu, N).
pub fn weight_multiplicity_r(c: &CartanData, nu: &ModeMap, lambda: &WeightVector) -> BigInt {
    enumerate_patterns(c, nu, lambda)
        .iter()
        .map(|n| r_number(c, nu, n).value)
        .sum()
}

/// k_lambda^nu = sum over patterns of K(nu, N).
pub fn weight_multiplicity_k(c: &CartanData, nu: &ModeMap, lambda: &WeightVector) -> BigInt {
    enumerate_patterns(c, nu, lambda)
        .iter()
        .map(|n| k_number(c, nu, n))
        .sum()
}

/// Per-color lists of partitions of every size within the level budget,
/// tagged with the size.
fn color_partition_lists(c: &CartanData, level: u32) -> Vec<Vec<(u32, Partition)>> {
    (0..c.n)
        .map(|a| {
            let budget = c.t[a] as u32 * level;
            (0..=budget)
                .flat_map(|d| partitions_of(d).into_iter().map(move |p| (d, p)))
                .collect()
        })
        .collect()
}

/// Shared enumerator for the fermionic series: folds `value(N)` over all
/// patterns within the level budget into the coefficient of
/// `prod_a y_a^(sum_m m N_m^(a))`.
fn fermionic_series<FVal>(c: &CartanData, level: u32, mut value: FVal) -> TruncatedSeries
where
    FVal: FnMut(&[(Mode, u64)]) -> BigInt,
{
    let trunc = TruncationSpec::for_level(c, level);
    let lists = color_partition_lists(c, level);
    let mut out = TruncatedSeries::zero(trunc);
    let mut support: Vec<(Mode, u64)> = Vec::new();
    let mut exps = vec![0u32; c.n];

    fn rec<FVal>(
        c: &CartanData,
        lists: &[Vec<(u32, Partition)>],
        color: usize,
        support: &mut Vec<(Mode, u64)>,
        exps: &mut Vec<u32>,
        value: &mut FVal,
        out: &mut TruncatedSeries,
    ) where
        FVal: FnMut(&[(Mode, u64)]) -> BigInt,
    {
        if color == c.n {
            let v = value(support);
            if !v.is_zero() {
                out.add_term(exps, BigRational::from_integer(v));
            }
            return;
        }
        for (d, partition) in &lists[color] {
            let len0 = support.len();
            for &(m, count) in partition {
                support.push(((color, m), count));
            }
            exps[color] = *d;
            rec(c, lists, color + 1, support, exps, value, out);
            support.truncate(len0);
        }
        exps[color] = 0;
    }

    rec(c, &lists, 0, &mut support, &mut exps, &mut value, &mut out);
    out
}

/// R(nu, N) evaluated on a sorted support slice.  Hot path shared by the
/// series builders; asserts integrality exactly like `r_number`.
fn r_on_support(c: &CartanData, nu: &ModeMap, support: &[(Mode, u64)]) -> BigInt {
    if support.is_empty() {
        return BigInt::one();
    }
    let p: Vec<i64> = support
        .iter()
        .map(|&((a, m), _)| {
            let pair: i64 = support
                .iter()
                .map(|&((b, k), v)| pairing_min(c, a, m, b, k) * v as i64)
                .sum();
            gamma(nu, a, m) - pair
        })
        .collect();
    let det_f = det_f_on_support(c, support, &p);
    if det_f.is_zero() {
        return BigInt::zero();
    }
    let mut numer = det_f;
    let mut denom = BigInt::one();
    for (i, &(_, count)) in support.iter().enumerate() {
        let nm = count as i64;
        numer *= binomial_int(p[i] + nm - 1, nm - 1);
        if numer.is_zero() {
            return BigInt::zero();
        }
        denom *= BigInt::from(nm);
    }
    let (q, r) = num_integer::Integer::div_rem(&numer, &denom);
    assert!(r.is_zero(), "R(nu,N) must be an integer");
    q
}

fn k_on_support(c: &CartanData, nu: &ModeMap, support: &[(Mode, u64)]) -> BigInt {
    let mut out = BigInt::one();
    for &((a, m), count) in support {
        let pair: i64 = support
            .iter()
            .map(|&((b, k), v)| pairing_min(c, a, m, b, k) * v as i64)
            .sum();
        let p = gamma(nu, a, m) - pair;
        out *= binomial_int(p + count as i64, count as i64);
        if out.is_zero() {
            break;
        }
    }
    out
}

/// The series sum_N R(nu,N) prod_a y_a^(sum_m m N_m^(a)) modulo the level-l
/// truncation ideal.  With nu = delta_m^(a) this is the KR candidate series.
pub fn r_series(c: &CartanData, nu: &ModeMap, level: u32) -> TruncatedSeries {
    fermionic_series(c, level, |support| r_on_support(c, nu, support))
}

/// The series sum_N K(0,N) prod_a y_a^(sum_m m N_m^(a)) modulo the level-l
/// truncation ideal.
pub fn k0_series(c: &CartanData, level: u32) -> TruncatedSeries {
    let zero = ModeMap::new();
    fermionic_series(c, level, |support| k_on_support(c, &zero, support))
}

/// Same enumerator with arbitrary nu, for cross-checks of K-side identities.
pub fn k_series(c: &CartanData, nu: &ModeMap, level: u32) -> TruncatedSeries {
    fermionic_series(c, level, |support| k_on_support(c, nu, support))
}

/// The fermionic Q-table: r_series(delta_m^(a)) for all m <= t_a l + 1.
pub fn fermionic_q_table(c: &CartanData, level: u32) -> QTable {
    let mut table = QTable::new(c, level);
    for a in 0..c.n {
        for m in 1..=(c.t[a] as u32 * level + 1) {
            table.insert(a, m, r_series(c, &ModeMap::delta(a, m), level));
        }
    }
    table
}

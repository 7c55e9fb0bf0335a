//! The string center equation (SCE): the linear congruence
//! `A u = (P + N + 1)/2 mod Z` obeyed by string centers, counted two ways —
//! by Mobius inversion over products of set-partition lattices, and by brute
//! force through a Smith normal form of A — plus the admissibility
//! predicates for string patterns.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cartan::{AlgebraId, CartanData, Rat};
use crate::error::{Error, Result};
use crate::fermionic::{self, ModeMap};
use crate::linalg::{det_bigint, det_i64};
use crate::qsystem::Mode;

/// The string center equation of a pattern N over quantum space data nu.
///
/// Rows and columns are indexed by triples (a, m, alpha) with (a, m) running
/// over the support of N in lexicographic order and alpha = 1..N_m^(a).
#[derive(Clone, Debug)]
pub struct SCEInstance {
    pub algebra: AlgebraId,
    pub nu: ModeMap,
    pub pattern: ModeMap,
    /// Support modes of N, sorted.
    pub modes: Vec<Mode>,
    /// N_m^(a) per support mode.
    pub counts: Vec<u64>,
    /// P_m^(a) per support mode.
    pub vacancies: Vec<i64>,
    /// Row index -> (position into `modes`, alpha).
    pub rows: Vec<(usize, usize)>,
    /// The d x d integer matrix A.
    pub matrix: Vec<Vec<i64>>,
    /// Right-hand side (P + N + 1)/2 per row.
    pub rhs: Vec<Rat>,
}

/// Assembles the SCE matrix
/// `A_{am alpha, bk beta} = ddd (P+N) + (alpha_a|alpha_b) min(t_b m, t_a k) - dd`.
pub fn build_sce(c: &CartanData, nu: &ModeMap, n: &ModeMap) -> Result<SCEInstance> {
    if n.is_zero() {
        return Err(Error::EmptyPattern);
    }
    let modes = n.support();
    let counts: Vec<u64> = modes.iter().map(|&(a, m)| n.get(a, m)).collect();
    let vacancies: Vec<i64> = modes
        .iter()
        .map(|&(a, m)| fermionic::vacancy(c, nu, n, a, m))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (pos, &count) in counts.iter().enumerate() {
        for alpha in 0..count as usize {
            rows.push((pos, alpha));
        }
    }
    let d = rows.len();
    let mut matrix = vec![vec![0i64; d]; d];
    for (i, &(pi, ai)) in rows.iter().enumerate() {
        let (a, m) = modes[pi];
        for (j, &(pj, aj)) in rows.iter().enumerate() {
            let (b, k) = modes[pj];
            let mut entry = pairing_min(c, a, m, b, k);
            if pi == pj {
                entry -= 1;
                if ai == aj {
                    entry += vacancies[pi] + counts[pi] as i64;
                }
            }
            matrix[i][j] = entry;
        }
    }
    for i in 0..d {
        for j in 0..d {
            assert_eq!(matrix[i][j], matrix[j][i], "SCE matrix must be symmetric");
        }
    }
    let rhs = rows
        .iter()
        .map(|&(pi, _)| Rat::new(vacancies[pi] + counts[pi] as i64 + 1, 2))
        .collect();
    Ok(SCEInstance {
        algebra: c.id,
        nu: nu.clone(),
        pattern: n.clone(),
        modes,
        counts,
        vacancies,
        rows,
        matrix,
        rhs,
    })
}

fn pairing_min(c: &CartanData, a: usize, m: u32, b: usize, k: u32) -> i64 {
    let v = c.bilinear[a][b] * Rat::from_integer((c.t[b] * m as i64).min(c.t[a] * k as i64));
    debug_assert!(v.is_integer());
    v.to_integer()
}

impl SCEInstance {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn det(&self) -> BigInt {
        det_i64(&self.matrix)
    }

    /// Whether all vacancy numbers are nonnegative on the support of N.
    pub fn vacancies_nonnegative(&self) -> bool {
        self.vacancies.iter().all(|&p| p >= 0)
    }
}

/// A partition of {0, .., k-1} into disjoint blocks; canonical form sorts
/// elements within blocks and blocks by least element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        SetPartition { blocks }
    }

    pub fn singletons(k: usize) -> Self {
        SetPartition {
            blocks: (0..k).map(|i| vec![i]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn length(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    fn block_of(&self, x: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&x))
            .expect("element covered")
    }

    /// Whether every block of `finer` sits inside a block of `self`.
    pub fn is_refined_by(&self, finer: &SetPartition) -> bool {
        if self.ground_size() != finer.ground_size() {
            return false;
        }
        finer.blocks.iter().all(|fb| {
            let home = self.block_of(fb[0]);
            fb.iter().all(|&x| self.block_of(x) == home)
        })
    }
}

/// All set partitions of {0, .., k-1}.
pub fn set_partitions(k: usize) -> Vec<SetPartition> {
    let mut result: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for i in 0..k {
        let mut next = Vec::new();
        for p in &result {
            for bidx in 0..p.len() {
                let mut q = p.clone();
                q[bidx].push(i);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![i]);
            next.push(q);
        }
        result = next;
    }
    result.into_iter().map(SetPartition::new).collect()
}

/// Mobius function mu(pi, top) of the set-partition lattice ordered so that
/// finer partitions are larger.  For each block B of pi containing k_B blocks
/// of top, the value contributes (-1)^(k_B - 1) (k_B - 1)!.
pub fn mobius_partition(pi: &SetPartition, top: &SetPartition) -> Result<BigInt> {
    if !pi.is_refined_by(top) {
        return Err(Error::NotARefinement);
    }
    let mut mu = BigInt::one();
    for block in pi.blocks() {
        let inner = top
            .blocks()
            .iter()
            .filter(|tb| block.contains(&tb[0]))
            .count();
        let mut factor = BigInt::one();
        for i in 1..inner {
            factor *= BigInt::from(i as i64);
        }
        if inner % 2 == 0 {
            factor = -factor;
        }
        mu *= factor;
    }
    Ok(mu)
}

/// det A^pi computed both from the closed form
/// `det F * prod (P+N)^(l(pi)-1)` and by literally summing columns over
/// blocks and discarding duplicate rows; the two must agree.
pub fn det_a_pi(c: &CartanData, inst: &SCEInstance, pi: &[SetPartition]) -> BigInt {
    assert_eq!(pi.len(), inst.modes.len());
    for (p, &count) in pi.iter().zip(&inst.counts) {
        assert_eq!(
            p.ground_size(),
            count as usize,
            "partition sizes must match N"
        );
    }

    // closed form
    let support: Vec<(Mode, u64)> = inst
        .modes
        .iter()
        .copied()
        .zip(inst.counts.iter().copied())
        .collect();
    let det_f = det_f_from_instance(c, inst, &support);
    let mut closed = det_f;
    for (pos, p) in pi.iter().enumerate() {
        let base = BigInt::from(inst.vacancies[pos] + inst.counts[pos] as i64);
        for _ in 1..p.length() {
            closed *= &base;
        }
    }

    // literal reduction of A
    let mut col_groups: Vec<(usize, Vec<usize>)> = Vec::new(); // (mode pos, row indices)
    let mut row_reps: Vec<usize> = Vec::new();
    for (pos, p) in pi.iter().enumerate() {
        for block in p.blocks() {
            let rows: Vec<usize> = block
                .iter()
                .map(|&alpha| {
                    inst.rows
                        .iter()
                        .position(|&(pi2, a2)| pi2 == pos && a2 == alpha)
                        .expect("row present")
                })
                .collect();
            row_reps.push(rows[0]);
            col_groups.push((pos, rows));
        }
    }
    let l = col_groups.len();
    let mut reduced = vec![vec![BigInt::zero(); l]; l];
    for (i, &ri) in row_reps.iter().enumerate() {
        for (j, (_, cols)) in col_groups.iter().enumerate() {
            let sum: i64 = cols.iter().map(|&cj| inst.matrix[ri][cj]).sum();
            reduced[i][j] = BigInt::from(sum);
        }
    }
    let direct = det_bigint(reduced);
    assert_eq!(
        closed, direct,
        "closed form and reduction of det A^pi disagree"
    );
    closed
}

fn det_f_from_instance(c: &CartanData, inst: &SCEInstance, support: &[(Mode, u64)]) -> BigInt {
    let s = support.len();
    let mut f = vec![vec![0i64; s]; s];
    for (i, &((a, m), _)) in support.iter().enumerate() {
        for (j, &((b, k), count)) in support.iter().enumerate() {
            let mut entry = pairing_min(c, a, m, b, k) * count as i64;
            if i == j {
                entry += inst.vacancies[i];
            }
            f[i][j] = entry;
        }
    }
    det_i64(&f)
}

/// Result of the Mobius count of off-diagonal solutions.
#[derive(Clone, Debug)]
pub struct MobiusCount {
    /// sum_pi mu(pi, finest) det A^pi / prod N!, as an exact rational.
    pub value: BigRational,
    /// Whether the nonnegativity hypothesis on the vacancies held; when it
    /// fails the count is still returned but is not backed by the theory.
    pub hypothesis_ok: bool,
}

/// Counts off-diagonal solutions per orbit of coordinate permutations:
/// `sum_{pi} mu(pi, finest) det A^pi / prod N_m^(a)!`.
pub fn count_offdiagonal_mobius(c: &CartanData, inst: &SCEInstance) -> MobiusCount {
    let per_mode: Vec<Vec<SetPartition>> = inst
        .counts
        .iter()
        .map(|&n| set_partitions(n as usize))
        .collect();
    let tops: Vec<SetPartition> = inst
        .counts
        .iter()
        .map(|&n| SetPartition::singletons(n as usize))
        .collect();
    let mut total = BigInt::zero();
    let mut family = vec![0usize; per_mode.len()];
    loop {
        let pi: Vec<SetPartition> = family
            .iter()
            .enumerate()
            .map(|(i, &j)| per_mode[i][j].clone())
            .collect();
        let mut mu = BigInt::one();
        for (p, top) in pi.iter().zip(&tops) {
            mu *= mobius_partition(p, top).expect("singletons refine everything");
        }
        total += mu * det_a_pi(c, inst, &pi);
        // odometer
        let mut pos = 0;
        loop {
            if pos == family.len() {
                let mut fact = BigInt::one();
                for &n in &inst.counts {
                    for i in 1..=n {
                        fact *= BigInt::from(i);
                    }
                }
                return MobiusCount {
                    value: BigRational::new(total, fact),
                    hypothesis_ok: inst.vacancies_nonnegative(),
                };
            }
            family[pos] += 1;
            if family[pos] < per_mode[pos].len() {
                break;
            }
            family[pos] = 0;
            pos += 1;
        }
    }
}

/// All solutions of `A u = rhs mod Z^d` as canonical representatives in
/// [0,1)^d, via a Smith normal form `S = L A R`.
pub fn enumerate_solutions_bruteforce(
    inst: &SCEInstance,
    max_det: u64,
) -> Result<Vec<Vec<BigRational>>> {
    let det = inst.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let count = det
        .magnitude()
        .to_u64()
        .filter(|&d| d <= max_det)
        .ok_or_else(|| Error::DetTooLarge {
            det: det.to_string(),
            max: max_det,
        })?;
    let d = inst.dimension();
    let a: Vec<Vec<BigInt>> = inst
        .matrix
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let (s, l, r) = smith_normal_form(a);
    let rhs: Vec<BigRational> = inst
        .rhs
        .iter()
        .map(|q| BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom())))
        .collect();
    // transformed right-hand side L * rhs
    let lc: Vec<BigRational> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::from_integer(l[i][j].clone()) * &rhs[j])
                .sum()
        })
        .collect();
    let diag: Vec<BigInt> = (0..d).map(|i| s[i][i].clone()).collect();
    assert!(
        diag.iter().all(|x| x.is_positive()),
        "SNF diagonal must be positive"
    );

    let mut sols = Vec::with_capacity(count as usize);
    let mut index = vec![BigInt::zero(); d];
    loop {
        // u' with s_i u'_i = (Lc)_i + j_i
        let uprime: Vec<BigRational> = (0..d)
            .map(|i| {
                (&lc[i] + BigRational::from_integer(index[i].clone()))
                    / BigRational::from_integer(diag[i].clone())
            })
            .collect();
        // u = R u' reduced mod 1
        let u: Vec<BigRational> = (0..d)
            .map(|i| {
                let x: BigRational = (0..d)
                    .map(|j| BigRational::from_integer(r[i][j].clone()) * &uprime[j])
                    .sum();
                &x - x.floor()
            })
            .collect();
        // exact verification: A u - rhs must be integral
        for i in 0..d {
            let lhs: BigRational = (0..d)
                .map(|j| BigRational::from_integer(BigInt::from(inst.matrix[i][j])) * &u[j])
                .sum();
            assert!(
                (&lhs - &rhs[i]).is_integer(),
                "solution fails the congruence"
            );
        }
        sols.push(u);
        // odometer over prod s_i
        let mut pos = 0;
        loop {
            if pos == d {
                assert_eq!(sols.len() as u64, count, "solution count must be |det A|");
                return Ok(sols);
            }
            index[pos] += 1;
            if index[pos] < diag[pos] {
                break;
            }
            index[pos] = BigInt::zero();
            pos += 1;
        }
    }
}

/// Keeps solutions whose coordinates within each (a, m) group are pairwise
/// distinct; coordinates across groups may coincide.
pub fn filter_offdiagonal(inst: &SCEInstance, sols: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    sols.iter()
        .filter(|u| {
            let mut by_mode: BTreeMap<usize, Vec<&BigRational>> = BTreeMap::new();
            for (idx, &(pos, _)) in inst.rows.iter().enumerate() {
                by_mode.entry(pos).or_default().push(&u[idx]);
            }
            by_mode.values().all(|vals| {
                for i in 0..vals.len() {
                    for j in i + 1..vals.len() {
                        if vals[i] == vals[j] {
                            return false;
                        }
                    }
                }
                true
            })
        })
        .cloned()
        .collect()
}

/// Necessary condition for a generic string solution of pattern N: for every
/// supported (a, m) and 2 <= i <= m,
/// `sum_{k=1}^{min(i-1, m+1-i)} { (t/t_a)(P_{m+1-2k} + N_{m+1-2k}) + Delta_{m+1-2k} } > 0`.
pub fn check_order_condition(c: &CartanData, nu: &ModeMap, n: &ModeMap) -> bool {
    let t = c.max_t();
    for (a, m) in n.support() {
        for i in 2..=m {
            let kmax = (i - 1).min(m + 1 - i);
            let mut sum = 0i64;
            for k in 1..=kmax {
                let j = m + 1 - 2 * k;
                let p = fermionic::vacancy(c, nu, n, a, j).expect("integral vacancy");
                let ratio = t / c.t[a];
                assert_eq!(t % c.t[a], 0, "t/t_a is integral for simple types");
                sum += ratio * (p + n.get(a, j) as i64) + delta_correction(c, n, a, j);
            }
            if sum <= 0 {
                return false;
            }
        }
    }
    true
}

/// The correction Delta_j^(a): nonzero only for a long color adjacent to a
/// shorter one.
fn delta_correction(c: &CartanData, n: &ModeMap, a: usize, j: u32) -> i64 {
    if c.t[a] != 1 {
        return 0;
    }
    for b in 0..c.n {
        if b == a || c.cartan[a][b] == 0 || c.t[b] == 1 {
            continue;
        }
        return match c.t[b] {
            2 => -(n.get(b, 2 * j) as i64),
            _ => {
                -(n.get(b, 3 * j - 1) as i64
                    + 2 * n.get(b, 3 * j) as i64
                    + n.get(b, 3 * j + 1) as i64)
            }
        };
    }
    0
}

/// Genericity of an SCE solution: z != 1 wherever the quantum space forces a
/// factor (z - 1) with positive exponent, and z_{m alpha} != z_{k beta}
/// wherever the pairwise exponent is nonzero.  Centers are compared as
/// rationals mod 1 through z = exp(2 pi i u).
pub fn check_genericity(c: &CartanData, inst: &SCEInstance, sol: &[BigRational]) -> bool {
    let t = c.max_t();
    // first condition
    for (idx, &(pos, _)) in inst.rows.iter().enumerate() {
        let (a, m) = inst.modes[pos];
        let forced = (1..m)
            .filter(|k| (k % 2) != (m % 2))
            .any(|k| inst.nu.get(a, k) > 0);
        if forced && sol[idx].is_integer() {
            return false;
        }
    }
    // second condition
    for (i, &(pi, _)) in inst.rows.iter().enumerate() {
        let (a, m) = inst.modes[pi];
        for (j, &(pj, _)) in inst.rows.iter().enumerate() {
            if i == j {
                continue;
            }
            let (b, k) = inst.modes[pj];
            let parity = c.t[b] * (m as i64 - 1)
                - c.t[a] * (k as i64 - 1)
                - integral(c.bilinear[a][b] * Rat::from_integer(c.t[a] * c.t[b]));
            if parity.rem_euclid(2) != 0 {
                continue;
            }
            let tab = c.t[a].max(c.t[b]);
            let minv = (c.t[b] * m as i64).min(c.t[a] * k as i64);
            let dpm = delta_pm(c, a, m, b, k);
            let exponent =
                Rat::new(minv + (1 - t) * dpm, tab) - Rat::from_integer(((a, m) == (b, k)) as i64);
            if exponent != Rat::zero() && (&sol[i] - &sol[j]).is_integer() {
                return false;
            }
        }
    }
    true
}

fn integral(r: Rat) -> i64 {
    assert!(r.is_integer());
    r.to_integer()
}

/// The +-1 correction in the pairwise exponent between modes of different
/// lengths, nonzero only when t_b m - t_a k = +-1 mod 2t on the proper side.
fn delta_pm(c: &CartanData, a: usize, m: u32, b: usize, k: u32) -> i64 {
    let t = c.max_t();
    let diff = c.t[b] * m as i64 - c.t[a] * k as i64;
    let e = diff.rem_euclid(2 * t);
    if e != 1 && e != 2 * t - 1 {
        return 0;
    }
    if c.t[a] < c.t[b] && diff > 0 {
        if e == 1 {
            1
        } else {
            -1
        }
    } else if c.t[a] > c.t[b] && diff < 0 {
        if e == 1 {
            -1
        } else {
            1
        }
    } else {
        0
    }
}

type IntMatrix = Vec<Vec<BigInt>>;

/// Smith normal form with unimodular transforms: returns (S, L, R) with
/// S = L * A * R diagonal and nonnegative.
fn smith_normal_form(mut a: IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let n = a.len();
    let ident = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let mut l = ident(n);
    let mut r = ident(n);
    for tpos in 0..n {
        loop {
            // locate the smallest nonzero entry in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in tpos..n {
                for j in tpos..n {
                    if !a[i][j].is_zero()
                        && pivot
                            .map(|(pi, pj)| a[i][j].magnitude() < a[pi][pj].magnitude())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != tpos {
                a.swap(tpos, pi);
                l.swap(tpos, pi);
            }
            if pj != tpos {
                for row in a.iter_mut() {
                    row.swap(tpos, pj);
                }
                for row in r.iter_mut() {
                    row.swap(tpos, pj);
                }
            }
            let mut dirty = false;
            for i in tpos + 1..n {
                if !a[i][tpos].is_zero() {
                    let q = div_round(&a[i][tpos], &a[tpos][tpos]);
                    if !q.is_zero() {
                        for j in 0..n {
                            let v = &a[tpos][j] * &q;
                            a[i][j] -= v;
                            let v = &l[tpos][j] * &q;
                            l[i][j] -= v;
                        }
                    }
                    if !a[i][tpos].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in tpos + 1..n {
                if !a[tpos][j].is_zero() {
                    let q = div_round(&a[tpos][j], &a[tpos][tpos]);
                    if !q.is_zero() {
                        for i in 0..n {
                            let v = &a[i][tpos] * &q;
                            a[i][j] -= v;
                            let v = &r[i][tpos] * &q;
                            r[i][j] -= v;
                        }
                    }
                    if !a[tpos][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                let all_clear = (tpos + 1..n).all(|i| a[i][tpos].is_zero() && a[tpos][i].is_zero());
                if all_clear {
                    break;
                }
            }
        }
        if a[tpos][tpos].is_negative() {
            for j in 0..n {
                a[j][tpos] = -a[j][tpos].clone();
                r[j][tpos] = -r[j][tpos].clone();
            }
        }
    }
    (a, l, r)
}

/// Nearest-integer division, which shrinks remainders fastest.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, rem) = num_integer::Integer::div_rem(num, den);
    if rem.magnitude() * 2u32 > *den.magnitude() {
        if rem.is_negative() == den.is_negative() {
            q + BigInt::one()
        } else {
            q - BigInt::one()
        }
    } else {
        q
    }
}

/// Deterministic sampler of counting instances with nonnegative vacancies,
/// bounded dimension and bounded |det A|.
pub fn sample_instances(
    ids: &[AlgebraId],
    count: usize,
    max_dim: usize,
    max_det: u64,
    seed: u64,
) -> Vec<(CartanData, SCEInstance)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let data: Vec<CartanData> = ids
        .iter()
        .map(|&id| crate::cartan::build_cartan(id).expect("valid id"))
        .collect();
    let mut out = Vec::new();
    while out.len() < count {
        let c = &data[rng.random_range(0..data.len())];
        let mut nu = ModeMap::new();
        for _ in 0..rng.random_range(1..=2) {
            nu.add(
                rng.random_range(0..c.n),
                rng.random_range(1..=3),
                rng.random_range(1..=5),
            );
        }
        let mut n = ModeMap::new();
        for _ in 0..rng.random_range(1..=2) {
            n.add(
                rng.random_range(0..c.n),
                rng.random_range(1..=2),
                rng.random_range(1..=2),
            );
        }
        if n.is_zero() || n.total() as usize > max_dim {
            continue;
        }
        let Ok(inst) = build_sce(c, &nu, &n) else {
            continue;
        };
        if !inst.vacancies_nonnegative() {
            continue;
        }
        match inst.det().magnitude().to_u64() {
            Some(d) if d > 0 && d <= max_det => out.push((c.clone(), inst)),
            _ => continue,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::build_cartan;

    fn a1() -> CartanData {
        build_cartan("A1".parse().unwrap()).unwrap()
    }

    fn instance(c: &CartanData, nu: &[(usize, u32, u64)], n: &[(usize, u32, u64)]) -> SCEInstance {
        build_sce(c, &ModeMap::from_triples(nu), &ModeMap::from_triples(n)).unwrap()
    }

    #[test]
    fn matrix_assembly() {
        let c = a1();
        let inst = instance(&c, &[(0, 1, 3)], &[(0, 1, 1)]);
        assert_eq!(inst.matrix, vec![vec![3]]);
        assert_eq!(inst.rhs, vec![Rat::new(3, 2)]);

        let degenerate = instance(&c, &[(0, 1, 2)], &[(0, 1, 2)]);
        assert_eq!(degenerate.matrix, vec![vec![1, 1], vec![1, 1]]);
        assert!(degenerate.det().is_zero());
        assert!(!degenerate.vacancies_nonnegative());

        let a2 = build_cartan("A2".parse().unwrap()).unwrap();
        let two_color = instance(&a2, &[(0, 1, 2), (1, 1, 2)], &[(0, 1, 1), (1, 1, 1)]);
        assert_eq!(two_color.matrix[0][1], -1);
        assert_eq!(two_color.matrix[1][0], -1);

        assert!(build_sce(&c, &ModeMap::new(), &ModeMap::new()).is_err());
    }

    #[test]
    fn mobius_values() {
        let top2 = SetPartition::singletons(2);
        let block2 = SetPartition::new(vec![vec![0, 1]]);
        assert_eq!(mobius_partition(&block2, &top2).unwrap(), BigInt::from(-1));
        assert_eq!(mobius_partition(&top2, &top2).unwrap(), BigInt::one());
        let top3 = SetPartition::singletons(3);
        let block3 = SetPartition::new(vec![vec![0, 1, 2]]);
        assert_eq!(mobius_partition(&block3, &top3).unwrap(), BigInt::from(2));
        // refinement precondition
        assert!(mobius_partition(&top3, &block3).is_err());
    }

    #[test]
    fn falling_factorial_identity() {
        // (X)_{l(pi)} = sum_{pi' <= pi} mu(pi', pi) X^{l(pi')} checked by
        // evaluation at X = 0..K for every pi.
        for k in 1..=6usize {
            let all = set_partitions(k);
            for pi in &all {
                for x in 0..=(k as i64) {
                    let mut falling = BigInt::one();
                    for i in 0..pi.length() as i64 {
                        falling *= BigInt::from(x - i);
                    }
                    let mut sum = BigInt::zero();
                    for coarser in all.iter().filter(|q| q.is_refined_by(pi)) {
                        let mu = mobius_partition(coarser, pi).unwrap();
                        sum += mu * BigInt::from(x).pow(coarser.length() as u32);
                    }
                    assert_eq!(falling, sum, "k={k} pi={pi:?} x={x}");
                }
            }
        }
    }

    #[test]
    fn det_a_pi_routes_agree() {
        let c = a1();
        let single = instance(&c, &[(0, 1, 3)], &[(0, 1, 1)]);
        let trivial = vec![SetPartition::singletons(1)];
        assert_eq!(det_a_pi(&c, &single, &trivial), BigInt::from(3));

        let pair = instance(&c, &[(0, 1, 4)], &[(0, 1, 2)]);
        assert_eq!(pair.matrix, vec![vec![3, 1], vec![1, 3]]);
        let finest = vec![SetPartition::singletons(2)];
        assert_eq!(det_a_pi(&c, &pair, &finest), BigInt::from(8));
        let merged = vec![SetPartition::new(vec![vec![0, 1]])];
        assert_eq!(det_a_pi(&c, &pair, &merged), BigInt::from(4));
    }

    #[test]
    fn mobius_count_matches_r() {
        let c = a1();
        let single = instance(&c, &[(0, 1, 3)], &[(0, 1, 1)]);
        let mc = count_offdiagonal_mobius(&c, &single);
        assert!(mc.hypothesis_ok);
        assert_eq!(mc.value, BigRational::from_integer(BigInt::from(3)));

        let pair = instance(&c, &[(0, 1, 4)], &[(0, 1, 2)]);
        let mc = count_offdiagonal_mobius(&c, &pair);
        assert_eq!(mc.value, BigRational::from_integer(BigInt::from(2)));
        assert_eq!(
            mc.value,
            BigRational::from_integer(fermionic::r_number(&c, &pair.nu, &pair.pattern).value)
        );
    }

    #[test]
    fn brute_force_small_congruences() {
        let c = a1();
        // 2u = 1/2 mod Z
        let mut inst = instance(&c, &[(0, 1, 3)], &[(0, 1, 1)]);
        inst.matrix = vec![vec![2]];
        inst.rhs = vec![Rat::new(1, 2)];
        let sols = enumerate_solutions_bruteforce(&inst, 1000).unwrap();
        let vals: Vec<BigRational> = sols.into_iter().map(|mut v| v.remove(0)).collect();
        assert_eq!(vals.len(), 2);
        assert!(vals.contains(&BigRational::new(1.into(), 4.into())));
        assert!(vals.contains(&BigRational::new(3.into(), 4.into())));

        // 3u = 3/2 mod Z
        let threes = instance(&c, &[(0, 1, 3)], &[(0, 1, 1)]);
        let sols = enumerate_solutions_bruteforce(&threes, 1000).unwrap();
        let vals: Vec<BigRational> = sols.into_iter().map(|mut v| v.remove(0)).collect();
        assert_eq!(vals.len(), 3);
        for expect in [(1, 6), (1, 2), (5, 6)] {
            assert!(vals.contains(&BigRational::new(expect.0.into(), expect.1.into())));
        }
    }

    #[test]
    fn brute_force_guard() {
        let c = a1();
        let inst = instance(&c, &[(0, 1, 3)], &[(0, 1, 1)]);
        assert!(matches!(
            enumerate_solutions_bruteforce(&inst, 2),
            Err(Error::DetTooLarge { .. })
        ));
        let mut singular = instance(&c, &[(0, 1, 2)], &[(0, 1, 2)]);
        singular.matrix = vec![vec![1, 1], vec![1, 1]];
        assert!(matches!(
            enumerate_solutions_bruteforce(&singular, 1000),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn three_way_count_on_pair_instance() {
        let c = a1();
        let pair = instance(&c, &[(0, 1, 4)], &[(0, 1, 2)]);
        let sols = enumerate_solutions_bruteforce(&pair, 1000).unwrap();
        assert_eq!(sols.len(), 8);
        let off = filter_offdiagonal(&pair, &sols);
        assert_eq!(off.len(), 4);
        let r = fermionic::r_number(&c, &pair.nu, &pair.pattern).value;
        assert_eq!(BigInt::from(off.len() as i64 / 2), r);
    }

    #[test]
    fn filter_keeps_singletons() {
        let c = a1();
        let single = instance(&c, &[(0, 1, 3)], &[(0, 1, 1)]);
        let sols = enumerate_solutions_bruteforce(&single, 1000).unwrap();
        assert_eq!(filter_offdiagonal(&single, &sols).len(), sols.len());
    }

    #[test]
    fn order_condition_cases() {
        let c = a1();
        // all strings of length one: nothing to check
        assert!(check_order_condition(
            &c,
            &ModeMap::from_triples(&[(0, 1, 2)]),
            &ModeMap::from_triples(&[(0, 1, 2)])
        ));
        // nu_1 = 4, one 2-string: P_1 + N_1 = 2 > 0
        assert!(check_order_condition(
            &c,
            &ModeMap::from_triples(&[(0, 1, 4)]),
            &ModeMap::delta(0, 2)
        ));
        // nu_1 = 2, one 2-string: P_1 + N_1 = 0, fails
        assert!(!check_order_condition(
            &c,
            &ModeMap::from_triples(&[(0, 1, 2)]),
            &ModeMap::delta(0, 2)
        ));
        // nu_2 = 1, one 2-string: P_1 = -1, fails
        assert!(!check_order_condition(
            &c,
            &ModeMap::delta(0, 2),
            &ModeMap::delta(0, 2)
        ));
    }

    #[test]
    fn genericity_cases() {
        let c = a1();
        // single 1-strings are generic whenever distinctness is respected
        let single = instance(&c, &[(0, 1, 3)], &[(0, 1, 1)]);
        let sols = enumerate_solutions_bruteforce(&single, 1000).unwrap();
        for sol in filter_offdiagonal(&single, &sols) {
            assert!(check_genericity(&c, &single, &sol));
        }
        // a 2-string over nu_1 = 2: the solution u = 0 has z = 1 and fails
        let two = instance(&c, &[(0, 1, 2)], &[(0, 2, 1)]);
        let sols = enumerate_solutions_bruteforce(&two, 1000).unwrap();
        let zero = vec![BigRational::zero()];
        assert!(sols.contains(&zero));
        assert!(!check_genericity(&c, &two, &zero));
        let half = vec![BigRational::new(1.into(), 2.into())];
        assert!(sols.contains(&half));
        assert!(check_genericity(&c, &two, &half));
    }

    #[test]
    fn string_length_correction_cases() {
        // B2: 2t = 4; mixed-length pairs pick up the +-1 correction exactly
        // when t_b m - t_a k = +-1 mod 4 on the proper side
        let b2 = build_cartan("B2".parse().unwrap()).unwrap();
        // long row color a = 0 (t=1), short column color b = 1 (t=2)
        assert_eq!(delta_pm(&b2, 0, 1, 1, 1), 1); // diff = 1
        assert_eq!(delta_pm(&b2, 0, 3, 1, 3), -1); // diff = 3 = -1 mod 4
        assert_eq!(delta_pm(&b2, 0, 1, 1, 3), 0); // diff = -1 but t_a < t_b needs diff > 0
                                                  // short row color a = 1 (t=2), long column color b = 0 (t=1)
        assert_eq!(delta_pm(&b2, 1, 1, 0, 1), 1); // diff = -1, -Delta = -1
        assert_eq!(delta_pm(&b2, 1, 3, 0, 1), 0); // diff = 1 but t_a > t_b needs diff < 0
        assert_eq!(delta_pm(&b2, 1, 1, 0, 3), 1); // diff = -5 = -1 mod 4
                                                  // same lengths never pick up a correction
        assert_eq!(delta_pm(&b2, 0, 2, 0, 1), 0);

        // G2: 2t = 6
        let g2 = build_cartan("G2".parse().unwrap()).unwrap();
        assert_eq!(delta_pm(&g2, 0, 1, 1, 2), 1); // diff = 1
        assert_eq!(delta_pm(&g2, 0, 3, 1, 4), -1); // diff = 5 = -1 mod 6
        assert_eq!(delta_pm(&g2, 0, 1, 1, 3), 0); // diff = 0
        assert_eq!(delta_pm(&g2, 0, 1, 1, 4), 0); // diff = -1, wrong side
    }

    #[test]
    fn snf_reconstructs() {
        let m = [vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let big: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let (s, l, r) = smith_normal_form(big.clone());
        let n = 3;
        // S = L A R
        let mut lar = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for p in 0..n {
                    for q in 0..n {
                        acc += &l[i][p] * &big[p][q] * &r[q][j];
                    }
                }
                lar[i][j] = acc;
            }
        }
        assert_eq!(lar, s);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert!(s[i][j].is_zero());
                }
            }
        }
        // L and R are unimodular
        assert_eq!(det_bigint(l).abs(), BigInt::one());
        assert_eq!(det_bigint(r).abs(), BigInt::one());
    }

    #[test]
    fn det_a_pi_positive_under_nonnegative_vacancies() {
        let ids: Vec<AlgebraId> = ["A1", "A2", "B2", "G2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for (c, inst) in sample_instances(&ids, 12, 4, 10_000, 5) {
            let per_mode: Vec<Vec<SetPartition>> = inst
                .counts
                .iter()
                .map(|&n| set_partitions(n as usize))
                .collect();
            let mut family = vec![0usize; per_mode.len()];
            'outer: loop {
                let pi: Vec<SetPartition> = family
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| per_mode[i][j].clone())
                    .collect();
                assert!(det_a_pi(&c, &inst, &pi) > BigInt::zero());
                let mut pos = 0;
                loop {
                    if pos == family.len() {
                        break 'outer;
                    }
                    family[pos] += 1;
                    if family[pos] < per_mode[pos].len() {
                        break;
                    }
                    family[pos] = 0;
                    pos += 1;
                }
            }
        }
    }

    #[test]
    fn sampled_three_way_equality() {
        let ids: Vec<AlgebraId> = ["A1", "A2", "B2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for (c, inst) in sample_instances(&ids, 8, 4, 10_000, 11) {
            let mobius = count_offdiagonal_mobius(&c, &inst);
            assert!(mobius.hypothesis_ok);
            let sols = enumerate_solutions_bruteforce(&inst, 100_000).unwrap();
            let off = filter_offdiagonal(&inst, &sols);
            let mut fact = BigInt::one();
            for &n in &inst.counts {
                for i in 1..=n {
                    fact *= BigInt::from(i);
                }
            }
            let brute = BigRational::new(BigInt::from(off.len() as u64), fact);
            let r = fermionic::r_number(&c, &inst.nu, &inst.pattern).value;
            assert_eq!(brute, mobius.value);
            assert_eq!(brute, BigRational::from_integer(r));
        }
    }
}

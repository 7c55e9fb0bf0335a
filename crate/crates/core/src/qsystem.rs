//! The coupling function B, the Q-system recursion, and the verification
//! predicates for the quadratic relation and the convergence property.
//!
//! The Q-system reads, for each color a and m >= 1,
//!
//! ```text
//! (Q_m^(a))^2 = Q_{m+1}^(a) Q_{m-1}^(a)
//!             + y_a^m (Q_m^(a))^2 prod_{(b,k)} (Q_k^(b))^(-(alpha_a|alpha_b) B_{am,bk})
//! ```
//!
//! with Q_0^(a) = 1, and the convergence property asks that Q_m^(a) and
//! Q_{m+1}^(a) agree modulo y_a^{m+1}.

use std::collections::BTreeMap;

use crate::cartan::{CartanData, Rat};
use crate::error::Result;
use crate::series::{TruncatedSeries, TruncationSpec};

/// A mode is a pair (color, m) with zero-based color and m >= 1.
pub type Mode = (usize, u32);

/// B_{am,bk} = 2 min(t_b m, t_a k) - min(t_b m, t_a(k+1)) - min(t_b m, t_a(k-1)).
pub fn b_coeff(c: &CartanData, a: usize, m: u32, b: usize, k: u32) -> i64 {
    let (m, k) = (m as i64, k as i64);
    let (ta, tb) = (c.t[a], c.t[b]);
    let tm = tb * m;
    2 * tm.min(ta * k) - tm.min(ta * (k + 1)) - tm.min(ta * (k - 1))
}

/// Case-by-case closed form of `b_coeff`.
pub fn b_coeff_closed(c: &CartanData, a: usize, m: u32, b: usize, k: u32) -> i64 {
    let (m, k) = (m as i64, k as i64);
    let (ta, tb) = (c.t[a], c.t[b]);
    let d = |x: i64, y: i64| (x == y) as i64;
    match (ta, tb) {
        (2, 1) => 2 * d(m, 2 * k) + d(m, 2 * k + 1) + d(m, 2 * k - 1),
        (3, 1) => {
            3 * d(m, 3 * k)
                + 2 * d(m, 3 * k + 1)
                + 2 * d(m, 3 * k - 1)
                + d(m, 3 * k + 2)
                + d(m, 3 * k - 2)
        }
        _ => ta * d(tb * m, ta * k),
    }
}

/// Modes (a, m) with 1 <= m <= t_a l.
pub fn modes_h_l(c: &CartanData, l: u32) -> Vec<Mode> {
    let mut out = Vec::new();
    for a in 0..c.n {
        for m in 1..=(c.t[a] as u32 * l) {
            out.push((a, m));
        }
    }
    out
}

/// Membership in the recursion filtration: t(m-1) <= t_a(l-1).
pub fn in_recursion_filtration(c: &CartanData, a: usize, m: u32, l: u32) -> bool {
    c.max_t() * (m as i64 - 1) <= c.t[a] * (l as i64 - 1)
}

/// Table of the series Q_m^(a) modulo the level-l truncation ideal,
/// populated for m <= t_a l + 1 (Q_0 = 1 implicitly).
#[derive(Clone, Debug)]
pub struct QTable {
    pub level: u32,
    pub trunc: TruncationSpec,
    entries: BTreeMap<Mode, TruncatedSeries>,
}

impl QTable {
    pub fn new(c: &CartanData, level: u32) -> Self {
        QTable {
            level,
            trunc: TruncationSpec::for_level(c, level),
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, a: usize, m: u32, series: TruncatedSeries) {
        assert_eq!(series.trunc(), &self.trunc);
        self.entries.insert((a, m), series);
    }

    /// Q_m^(a); m = 0 yields the constant series one.
    pub fn get(&self, a: usize, m: u32) -> Option<TruncatedSeries> {
        if m == 0 {
            return Some(TruncatedSeries::one(self.trunc.clone()));
        }
        self.entries.get(&(a, m)).cloned()
    }

    pub fn modes(&self) -> impl Iterator<Item = &Mode> {
        self.entries.keys()
    }
}

/// Solves the Q-system forward from the color series Q_1^(a).
///
/// Rearranged recursion:
/// `Q_{m+1} = (Q_m^2 / Q_{m-1}) (1 - y_a^m prod (Q_k^(b))^(-(alpha_a|alpha_b) B_{am,bk}))`.
/// Modes are filled following the filtration so that every factor on the
/// right is already known; the result covers all m <= t_a l + 1.
pub fn q_forward(c: &CartanData, q1: &[TruncatedSeries], level: u32) -> Result<QTable> {
    assert_eq!(q1.len(), c.n);
    let mut table = QTable::new(c, level);
    for (a, series) in q1.iter().enumerate() {
        assert_eq!(
            series.trunc(),
            &table.trunc,
            "q1 must be truncated at the table level"
        );
        table.insert(a, 1, series.clone());
    }
    let top = c.max_t() as u32 * level + 1;
    for lam in 2..=top {
        for a in 0..c.n {
            let mmax = c.t[a] as u32 * level + 1;
            for mnext in 2..=mmax {
                if table.get(a, mnext).is_some() {
                    continue;
                }
                if !in_recursion_filtration(c, a, mnext, lam)
                    || in_recursion_filtration(c, a, mnext, lam - 1)
                {
                    continue;
                }
                let m = mnext - 1;
                let qm = table.get(a, m).expect("previous mode filled");
                let qm_prev = table.get(a, m - 1).expect("previous mode filled");
                let product = coupling_product(c, &table, a, m)?;
                let mut exps = vec![0u32; c.n];
                exps[a] = m;
                let ym = TruncatedSeries::monomial(
                    table.trunc.clone(),
                    exps,
                    num_rational::BigRational::from_integer(1.into()),
                );
                let bracket = &TruncatedSeries::one(table.trunc.clone()) - &(&ym * &product);
                let next = &(&(&qm * &qm) * &qm_prev.invert_unit()?) * &bracket;
                table.insert(a, mnext, next);
            }
        }
    }
    Ok(table)
}

/// `prod_{(b,k)} (Q_k^(b))^(-(alpha_a|alpha_b) B_{am,bk})`, a finite product.
fn coupling_product(c: &CartanData, table: &QTable, a: usize, m: u32) -> Result<TruncatedSeries> {
    let mut product = TruncatedSeries::one(table.trunc.clone());
    for b in 0..c.n {
        for k in 1..=(c.t[b] * m as i64 + 2) as u32 {
            let bc = b_coeff(c, a, m, b, k);
            if bc == 0 {
                continue;
            }
            let e = c.bilinear[a][b] * Rat::from_integer(bc);
            assert!(e.is_integer(), "coupling exponent must be integral");
            let exp = -e.to_integer();
            let q = table.get(b, k).unwrap_or_else(|| {
                panic!("factor Q_{k}^({}) missing for mode ({},{m})", b + 1, a + 1)
            });
            product = &product * &q.pow_int(exp)?;
        }
    }
    Ok(product)
}

/// Residual report of the quadratic relation over all modes of H_l.
#[derive(Clone, Debug)]
pub struct QsysReport {
    pub checked: Vec<Mode>,
    /// Modes with a nonvanishing residual, and the residual series.
    pub failures: Vec<(Mode, TruncatedSeries)>,
}

impl QsysReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates LHS - RHS of the quadratic relation for every (a, m) in H_l.
pub fn check_qsystem(c: &CartanData, table: &QTable) -> Result<QsysReport> {
    let mut report = QsysReport {
        checked: Vec::new(),
        failures: Vec::new(),
    };
    for &(a, m) in modes_h_l(c, table.level).iter() {
        let qm = table.get(a, m).expect("table covers H_l");
        let qnext = table.get(a, m + 1).expect("table covers m+1");
        let qprev = table.get(a, m - 1).expect("table covers m-1");
        let sq = &qm * &qm;
        let product = coupling_product(c, table, a, m)?;
        let mut exps = vec![0u32; c.n];
        exps[a] = m;
        let ym = TruncatedSeries::monomial(
            table.trunc.clone(),
            exps,
            num_rational::BigRational::from_integer(1.into()),
        );
        let rhs = &(&qnext * &qprev) + &(&(&ym * &sq) * &product);
        let residual = &sq - &rhs;
        report.checked.push((a, m));
        if !residual.is_zero() {
            report.failures.push(((a, m), residual));
        }
    }
    Ok(report)
}

/// Convergence predicate per color: Q_m^(a) = Q_{m+1}^(a) mod y_a^{m+1}
/// for every m with both entries in the table.
pub fn check_convergence(c: &CartanData, table: &QTable) -> Vec<bool> {
    (0..c.n)
        .map(|a| {
            let mmax = c.t[a] as u32 * table.level + 1;
            (1..mmax).all(|m| {
                let qm = table.get(a, m).expect("table covers H_l");
                let qnext = table.get(a, m + 1).expect("table covers m+1");
                let diff = &qnext - &qm;
                let ok = diff.terms().all(|(e, _)| e[a] > m);
                ok
            })
        })
        .collect()
}

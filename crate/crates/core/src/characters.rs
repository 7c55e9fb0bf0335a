//! Classical Lie algebra characters: Freudenthal's multiplicity recursion,
//! the closed-form KR character candidates for classical types, tensor
//! products, the Weyl denominator, and decomposition into irreducibles.
//!
//! This module is the independent oracle against which the fermionic counts
//! are checked; it never consults them.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cartan::{CartanData, Family, Rat, WeightVector};
use crate::error::{Error, Result};
use crate::series::{embed_weight, GroupAlgebraElement, TruncatedSeries, TruncationSpec};

/// Character cache keyed by highest weight; reuse across KR sums and tensor
/// decompositions saves repeated Freudenthal runs.
pub struct CharacterTable<'a> {
    c: &'a CartanData,
    cache: HashMap<WeightVector, GroupAlgebraElement>,
}

impl<'a> CharacterTable<'a> {
    pub fn new(c: &'a CartanData) -> Self {
        CharacterTable {
            c,
            cache: HashMap::new(),
        }
    }

    /// Irreducible character with dominant highest weight `lambda`.
    pub fn irreducible(&mut self, lambda: &WeightVector) -> Result<GroupAlgebraElement> {
        if !self.c.is_dominant(lambda) {
            return Err(Error::NonDominant(lambda.0.clone()));
        }
        if let Some(ch) = self.cache.get(lambda) {
            return Ok(ch.clone());
        }
        let ch = freudenthal(self.c, lambda);
        self.cache.insert(lambda.clone(), ch.clone());
        Ok(ch)
    }

    /// Closed-form KR character for classical families.
    pub fn kr(&mut self, a: usize, m: u32) -> Result<GroupAlgebraElement> {
        let weights = kr_summands(self.c, a, m)?;
        let mut out = GroupAlgebraElement::zero();
        for w in weights {
            out = &out + &self.irreducible(&w)?;
        }
        Ok(out)
    }

    /// Character of the tensor product selected by `nu` (KR factors with
    /// multiplicities).
    pub fn tensor(&mut self, nu: &crate::fermionic::ModeMap) -> Result<GroupAlgebraElement> {
        let mut out = GroupAlgebraElement::one(self.c.n);
        for ((a, m), mult) in nu.iter() {
            let factor = self.kr(a, m)?;
            for _ in 0..mult {
                out = &out * &factor;
            }
        }
        Ok(out)
    }

    /// Greedy decomposition of a character into irreducibles by repeatedly
    /// extracting the highest surviving weight.
    pub fn decompose(
        &mut self,
        ch: &GroupAlgebraElement,
    ) -> Result<BTreeMap<WeightVector, BigInt>> {
        let mut rest = ch.clone();
        let mut out = BTreeMap::new();
        while !rest.is_zero() {
            let (top, coeff) = highest_weight_term(self.c, &rest);
            if !self.c.is_dominant(&top) || coeff.is_negative() {
                return Err(Error::NotACharacter {
                    weight: top.0,
                    mult: coeff.to_string(),
                });
            }
            let irr = self.irreducible(&top)?;
            rest = &rest - &irr.scaled(&coeff);
            out.insert(top, coeff);
        }
        Ok(out)
    }
}

/// Weight of maximal height among the support, together with its coefficient.
fn highest_weight_term(c: &CartanData, g: &GroupAlgebraElement) -> (WeightVector, BigInt) {
    let (w, coeff) = g
        .support()
        .max_by_key(|(w, _)| {
            let h: Rat = c.root_coords_rational(w).into_iter().sum();
            h
        })
        .expect("nonzero element");
    (w.clone(), coeff.clone())
}

/// Irreducible character via Freudenthal's recursion.
pub fn irreducible_character(c: &CartanData, lambda: &WeightVector) -> Result<GroupAlgebraElement> {
    CharacterTable::new(c).irreducible(lambda)
}

/// KR character candidate for classical types.
pub fn classical_kr_character(c: &CartanData, a: usize, m: u32) -> Result<GroupAlgebraElement> {
    CharacterTable::new(c).kr(a, m)
}

/// Coefficient of e^lambda in the product of the given characters.
pub fn tensor_weight_multiplicity(
    factors: &[GroupAlgebraElement],
    lambda: &WeightVector,
) -> BigInt {
    let mut prod: Option<GroupAlgebraElement> = None;
    for f in factors {
        prod = Some(match prod {
            None => f.clone(),
            Some(p) => &p * f,
        });
    }
    match prod {
        None => {
            if lambda.is_zero() {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }
        Some(p) => p.coeff(lambda),
    }
}

/// prod_{alpha > 0} (1 - e^{-alpha}) in the group algebra.
pub fn weyl_denominator(c: &CartanData) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::one(c.n);
    for root in &c.pos_roots {
        let mut factor = GroupAlgebraElement::one(c.n);
        factor.add_term(c.weight_of_root(root).neg(), -BigInt::one());
        out = &out * &factor;
    }
    out
}

/// The Weyl denominator as a y-series: each positive root alpha with root
/// coordinates d contributes a factor (1 - y^d).
pub fn weyl_denominator_series(c: &CartanData, trunc: &TruncationSpec) -> TruncatedSeries {
    embed_weight(c, &weyl_denominator(c), &WeightVector::zero(c.n), trunc)
        .expect("denominator support lies below zero")
}

/// Decomposes a genuine character into irreducible multiplicities.
pub fn decompose_into_irreducibles(
    c: &CartanData,
    ch: &GroupAlgebraElement,
) -> Result<BTreeMap<WeightVector, BigInt>> {
    CharacterTable::new(c).decompose(ch)
}

/// Highest weights of the irreducible summands of the KR character,
/// per classical family.
fn kr_summands(c: &CartanData, a: usize, m: u32) -> Result<Vec<WeightVector>> {
    let n = c.n;
    assert!(a < n, "color out of range");
    let one_based = a + 1;
    match c.id.family {
        Family::A => Ok(vec![single(n, a, m)]),
        Family::B => Ok(step_two_sums(n, one_based, m, c.t[a])),
        Family::C => {
            if one_based == n {
                Ok(vec![single(n, a, m)])
            } else {
                // k_1 + ... + k_a <= m with k_b = m delta_ab mod 2
                let mut out = Vec::new();
                let mut ks = vec![0u32; one_based];
                enumerate_parity_bounded(&mut ks, 0, m, one_based, m, &mut |ks| {
                    let mut w = vec![0i64; n];
                    for (i, &k) in ks.iter().enumerate() {
                        w[i] = k as i64;
                    }
                    out.push(WeightVector(w));
                });
                Ok(out)
            }
        }
        Family::D => {
            if one_based >= n - 1 {
                Ok(vec![single(n, a, m)])
            } else {
                Ok(step_two_sums(n, one_based, m, c.t[a]))
            }
        }
        _ => Err(Error::ExceptionalKr(c.id.to_string())),
    }
}

fn single(n: usize, a: usize, m: u32) -> WeightVector {
    let mut w = vec![0i64; n];
    w[a] = m as i64;
    WeightVector(w)
}

/// Sums over k_{a0}, k_{a0+2}, ..., k_a >= 0 with
/// t_a (k_{a0} + ... + k_{a-2}) + k_a = m, where a0 = 0 or 1 matches the
/// parity of a and Lambda_0 = 0 contributes nothing.
fn step_two_sums(n: usize, a_one_based: usize, m: u32, ta: i64) -> Vec<WeightVector> {
    let mut indices: Vec<usize> = Vec::new();
    let mut j = a_one_based % 2;
    while j <= a_one_based {
        indices.push(j);
        j += 2;
    }
    // indices run a0, a0+2, ..., a; the last one carries the bare k_a term
    let mut out = Vec::new();
    let inner = &indices[..indices.len() - 1];
    // t_a * s + k_a = m  =>  s <= m / t_a
    let max_s = (m as i64 / ta) as u32;
    let mut current = vec![0u32; inner.len()];
    enumerate_compositions(&mut current, 0, max_s, &mut |comp, s| {
        let ka = m as i64 - ta * s as i64;
        if ka < 0 {
            return;
        }
        let mut w = vec![0i64; n];
        for (idx, &k) in inner.iter().zip(comp.iter()) {
            if *idx >= 1 {
                w[idx - 1] += k as i64;
            }
        }
        w[a_one_based - 1] += ka;
        out.push(WeightVector(w));
    });
    out.sort();
    out.dedup();
    out
}

/// All assignments of `current` with total sum <= bound, invoking f on each.
fn enumerate_compositions(
    current: &mut Vec<u32>,
    pos: usize,
    bound: u32,
    f: &mut impl FnMut(&[u32], u32),
) {
    if pos == current.len() {
        let s: u32 = current.iter().sum();
        f(current, s);
        return;
    }
    let used: u32 = current[..pos].iter().sum();
    for v in 0..=(bound - used) {
        current[pos] = v;
        enumerate_compositions(current, pos + 1, bound, f);
    }
    current[pos] = 0;
}

/// Enumerates k-vectors with sum <= bound and k_b = m delta_{b,a} mod 2.
fn enumerate_parity_bounded(
    ks: &mut Vec<u32>,
    pos: usize,
    bound: u32,
    a_one_based: usize,
    m: u32,
    f: &mut impl FnMut(&[u32]),
) {
    if pos == ks.len() {
        f(ks);
        return;
    }
    let used: u32 = ks[..pos].iter().sum();
    let parity = if pos + 1 == a_one_based { m % 2 } else { 0 };
    let mut v = parity;
    while v <= bound - used {
        ks[pos] = v;
        enumerate_parity_bounded(ks, pos + 1, bound, a_one_based, m, f);
        v += 2;
    }
    ks[pos] = 0;
}

/// Freudenthal's recursion.  Weight multiplicities are constant along Weyl
/// orbits, so the recursion only runs over dominant weights; the full weight
/// system is generated first by walking root strings downward from lambda.
fn freudenthal(c: &CartanData, lambda: &WeightVector) -> GroupAlgebraElement {
    let weights = weight_system(c, lambda);
    let rho = c.rho();
    let lam_rho = lambda.add(&rho);
    let lam_norm = c.pair_weights(&lam_rho, &lam_rho);

    // dominant weights sorted by increasing distance from lambda
    let mut dominants: Vec<(i64, WeightVector)> = weights
        .iter()
        .filter(|w| c.is_dominant(w))
        .map(|w| (height_gap(c, lambda, w), w.clone()))
        .collect();
    dominants.sort();

    let mut mult: HashMap<WeightVector, BigInt> = HashMap::new();
    for (gap, mu) in &dominants {
        if *gap == 0 {
            mult.insert(mu.clone(), BigInt::one());
            continue;
        }
        let mut acc = BigRational::zero();
        for root in &c.pos_roots {
            let root_w = c.weight_of_root(root);
            let mut k = 1i64;
            loop {
                let shifted = mu.add(&root_w.scaled(k));
                if !weights.contains(&shifted) {
                    break;
                }
                let dom = c.dominant_representative(&shifted);
                let m_up = mult.get(&dom).expect("higher weight already computed");
                let pair = c.pair_weight_root(&shifted, root);
                acc += BigRational::from_integer(m_up.clone())
                    * BigRational::new(BigInt::from(*pair.numer()), BigInt::from(*pair.denom()));
                k += 1;
            }
        }
        let mu_rho = mu.add(&rho);
        let denom = lam_norm - c.pair_weights(&mu_rho, &mu_rho);
        assert!(
            denom > Rat::zero(),
            "Freudenthal denominator must be positive"
        );
        let value = acc * BigRational::from_integer(BigInt::from(2))
            / BigRational::new(BigInt::from(*denom.numer()), BigInt::from(*denom.denom()));
        assert!(
            value.is_integer(),
            "Freudenthal multiplicity must be integral"
        );
        mult.insert(mu.clone(), value.to_integer());
    }

    let mut out = GroupAlgebraElement::zero();
    for w in &weights {
        let dom = c.dominant_representative(w);
        out.add_term(
            w.clone(),
            mult.get(&dom).expect("dominant computed").clone(),
        );
    }

    // cross-check against the Weyl dimension formula
    let dim = out.dimension();
    assert_eq!(
        BigRational::from_integer(dim),
        weyl_dimension(c, lambda),
        "dimension mismatch for {lambda:?}"
    );
    out
}

/// Height of lambda - mu in root coordinates (an integer for weights of the
/// same representation).
fn height_gap(c: &CartanData, lambda: &WeightVector, mu: &WeightVector) -> i64 {
    let coords = c.root_coords_rational(&lambda.sub(mu));
    let h: Rat = coords.into_iter().sum();
    assert!(h.is_integer());
    h.to_integer()
}

/// Full weight system of the irreducible with highest weight lambda: walk
/// each simple-root string downward from every known weight.
fn weight_system(c: &CartanData, lambda: &WeightVector) -> HashSet<WeightVector> {
    let mut seen = HashSet::new();
    let mut queue = vec![lambda.clone()];
    seen.insert(lambda.clone());
    while let Some(w) = queue.pop() {
        for a in 0..c.n {
            let coeff = w.0[a];
            if coeff <= 0 {
                continue;
            }
            let mut cur = w.clone();
            for _ in 0..coeff {
                cur = WeightVector((0..c.n).map(|b| cur.0[b] - c.cartan[b][a]).collect());
                if seen.insert(cur.clone()) {
                    queue.push(cur.clone());
                }
            }
        }
    }
    seen
}

/// Weyl dimension formula prod (lambda+rho|alpha) / (rho|alpha).
pub fn weyl_dimension(c: &CartanData, lambda: &WeightVector) -> BigRational {
    let rho = c.rho();
    let lam_rho = lambda.add(&rho);
    let mut out = BigRational::one();
    for root in &c.pos_roots {
        let num = c.pair_weight_root(&lam_rho, root);
        let den = c.pair_weight_root(&rho, root);
        out *= BigRational::new(BigInt::from(*num.numer()), BigInt::from(*num.denom()))
            / BigRational::new(BigInt::from(*den.numer()), BigInt::from(*den.denom()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::build_cartan;

    #[test]
    fn small_dimensions() {
        let a2 = build_cartan("A2".parse().unwrap()).unwrap();
        let ch = irreducible_character(&a2, &WeightVector(vec![1, 0])).unwrap();
        assert_eq!(ch.dimension(), BigInt::from(3));

        let adjoint = irreducible_character(&a2, &WeightVector(vec![1, 1])).unwrap();
        assert_eq!(adjoint.dimension(), BigInt::from(8));
        assert_eq!(adjoint.coeff(&WeightVector(vec![0, 0])), BigInt::from(2));

        let b2 = build_cartan("B2".parse().unwrap()).unwrap();
        let spinor = irreducible_character(&b2, &WeightVector(vec![0, 1])).unwrap();
        assert_eq!(spinor.dimension(), BigInt::from(4));

        let g2 = build_cartan("G2".parse().unwrap()).unwrap();
        let seven = irreducible_character(&g2, &WeightVector(vec![0, 1])).unwrap();
        assert_eq!(seven.dimension(), BigInt::from(7));
        let fourteen = irreducible_character(&g2, &WeightVector(vec![1, 0])).unwrap();
        assert_eq!(fourteen.dimension(), BigInt::from(14));
    }

    #[test]
    fn non_dominant_rejected() {
        let a2 = build_cartan("A2".parse().unwrap()).unwrap();
        assert!(irreducible_character(&a2, &WeightVector(vec![-1, 0])).is_err());
    }

    #[test]
    fn kr_summands_examples() {
        let a3 = build_cartan("A3".parse().unwrap()).unwrap();
        assert_eq!(
            kr_summands(&a3, 1, 3).unwrap(),
            vec![WeightVector(vec![0, 3, 0])]
        );

        let b2 = build_cartan("B2".parse().unwrap()).unwrap();
        let mut sums = kr_summands(&b2, 1, 2).unwrap();
        sums.sort();
        assert_eq!(
            sums,
            vec![WeightVector(vec![0, 0]), WeightVector(vec![0, 2])]
        );

        let c2 = build_cartan("C2".parse().unwrap()).unwrap();
        let mut sums = kr_summands(&c2, 0, 2).unwrap();
        sums.sort();
        assert_eq!(
            sums,
            vec![WeightVector(vec![0, 0]), WeightVector(vec![2, 0])]
        );

        let g2 = build_cartan("G2".parse().unwrap()).unwrap();
        assert!(classical_kr_character(&g2, 0, 1).is_err());
    }

    #[test]
    fn b2_kr_character_dimension() {
        // W_2^(2) for B2: chi(0) + chi(2 Lambda_2) has dimension 1 + 10.
        let b2 = build_cartan("B2".parse().unwrap()).unwrap();
        let ch = classical_kr_character(&b2, 1, 2).unwrap();
        assert_eq!(ch.dimension(), BigInt::from(11));
    }

    #[test]
    fn tensor_and_decomposition() {
        let a1 = build_cartan("A1".parse().unwrap()).unwrap();
        let two = irreducible_character(&a1, &WeightVector(vec![1])).unwrap();
        assert_eq!(
            tensor_weight_multiplicity(&[two.clone(), two.clone()], &WeightVector(vec![0])),
            BigInt::from(2)
        );
        assert_eq!(
            tensor_weight_multiplicity(&[], &WeightVector(vec![0])),
            BigInt::one()
        );
        let sq = &two * &two;
        let decomp = decompose_into_irreducibles(&a1, &sq).unwrap();
        let expected: BTreeMap<WeightVector, BigInt> = [
            (WeightVector(vec![2]), BigInt::one()),
            (WeightVector(vec![0]), BigInt::one()),
        ]
        .into_iter()
        .collect();
        assert_eq!(decomp, expected);

        // chi(lambda) decomposes to itself
        let a2 = build_cartan("A2".parse().unwrap()).unwrap();
        let ch = irreducible_character(&a2, &WeightVector(vec![1, 1])).unwrap();
        let decomp = decompose_into_irreducibles(&a2, &ch).unwrap();
        assert_eq!(decomp.len(), 1);
        assert_eq!(decomp[&WeightVector(vec![1, 1])], BigInt::one());

        // a non-character input errors out
        let mut bogus = GroupAlgebraElement::zero();
        bogus.add_term(WeightVector(vec![0, 0]), BigInt::from(-1));
        assert!(decompose_into_irreducibles(&a2, &bogus).is_err());
    }

    #[test]
    fn tensor_decomposition_a2_fundamental_square() {
        let a2 = build_cartan("A2".parse().unwrap()).unwrap();
        let three = irreducible_character(&a2, &WeightVector(vec![1, 0])).unwrap();
        let sq = &three * &three;
        let decomp = decompose_into_irreducibles(&a2, &sq).unwrap();
        assert_eq!(decomp[&WeightVector(vec![2, 0])], BigInt::one());
        assert_eq!(decomp[&WeightVector(vec![0, 1])], BigInt::one());
        assert_eq!(decomp.len(), 2);
    }

    #[test]
    fn weyl_denominator_factors() {
        let a1 = build_cartan("A1".parse().unwrap()).unwrap();
        let trunc = TruncationSpec::for_level(&a1, 2);
        let d = weyl_denominator_series(&a1, &trunc);
        let mut expect = TruncatedSeries::one(trunc.clone());
        expect.add_term(&[1], -BigRational::one());
        assert_eq!(d, expect);

        let a2 = build_cartan("A2".parse().unwrap()).unwrap();
        let trunc = TruncationSpec::for_level(&a2, 2);
        let d = weyl_denominator_series(&a2, &trunc);
        let factor = |e: Vec<u32>| {
            let mut s = TruncatedSeries::one(trunc.clone());
            s.add_term(&e, -BigRational::one());
            s
        };
        let expect = &(&factor(vec![1, 0]) * &factor(vec![0, 1])) * &factor(vec![1, 1]);
        assert_eq!(d, expect);

        let b2 = build_cartan("B2".parse().unwrap()).unwrap();
        assert_eq!(b2.pos_roots.len(), 4);
        let trunc = TruncationSpec::for_level(&b2, 1);
        // four factors, truncated
        let d = weyl_denominator_series(&b2, &trunc);
        let mut expect = TruncatedSeries::one(trunc.clone());
        for root in &b2.pos_roots {
            let exps: Vec<u32> = root.iter().map(|&x| x as u32).collect();
            let mut f = TruncatedSeries::one(trunc.clone());
            f.add_term(&exps, -BigRational::one());
            expect = &expect * &f;
        }
        assert_eq!(d, expect);
    }

    #[test]
    fn embedding_is_multiplicative() {
        // embed(g1 g2, h1 + h2) = embed(g1, h1) embed(g2, h2) for characters
        let a2 = build_cartan("A2".parse().unwrap()).unwrap();
        let trunc = crate::series::TruncationSpec::for_level(&a2, 2);
        let g1 = irreducible_character(&a2, &WeightVector(vec![1, 0])).unwrap();
        let g2 = irreducible_character(&a2, &WeightVector(vec![1, 1])).unwrap();
        let h1 = WeightVector(vec![1, 0]);
        let h2 = WeightVector(vec![1, 1]);
        let lhs = crate::series::embed_weight(&a2, &(&g1 * &g2), &h1.add(&h2), &trunc).unwrap();
        let rhs = &crate::series::embed_weight(&a2, &g1, &h1, &trunc).unwrap()
            * &crate::series::embed_weight(&a2, &g2, &h2, &trunc).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn embedded_kr_characters_solve_q_system() {
        // the closed-form characters, embedded as y-series, satisfy the
        // quadratic relation directly
        for id in ["A2", "B2", "C2"] {
            let c = build_cartan(id.parse().unwrap()).unwrap();
            let level = 2u32;
            let trunc = crate::series::TruncationSpec::for_level(&c, level);
            let mut chars = CharacterTable::new(&c);
            let mut table = crate::qsystem::QTable::new(&c, level);
            for a in 0..c.n {
                for m in 1..=(c.t[a] as u32 * level + 1) {
                    let ch = chars.kr(a, m).unwrap();
                    let mut top = vec![0i64; c.n];
                    top[a] = m as i64;
                    let emb =
                        crate::series::embed_weight(&c, &ch, &WeightVector(top), &trunc).unwrap();
                    table.insert(a, m, emb);
                }
            }
            let report = crate::qsystem::check_qsystem(&c, &table).unwrap();
            assert!(report.is_clean(), "{id}: {:?}", report.failures);
            assert!(
                crate::qsystem::check_convergence(&c, &table)
                    .iter()
                    .all(|&b| b),
                "{id}"
            );
        }
    }

    #[test]
    fn dimension_formula_sweep() {
        // every construction cross-checks the Weyl dimension formula
        // internally; sweep all highest weights with coordinates <= 2
        for id in ["A2", "A3", "B2", "B3", "C3"] {
            let c = build_cartan(id.parse().unwrap()).unwrap();
            let mut table = CharacterTable::new(&c);
            let mut coords = vec![0i64; c.n];
            'outer: loop {
                table.irreducible(&WeightVector(coords.clone())).unwrap();
                let mut pos = 0;
                loop {
                    if pos == c.n {
                        break 'outer;
                    }
                    coords[pos] += 1;
                    if coords[pos] <= 2 {
                        break;
                    }
                    coords[pos] = 0;
                    pos += 1;
                }
            }
        }
    }

    #[test]
    fn decomposition_inverts_assembly() {
        // sum mult * chi(lambda), decomposed, returns the same table
        let c = build_cartan("B2".parse().unwrap()).unwrap();
        let mut table = CharacterTable::new(&c);
        let input: Vec<(WeightVector, i64)> = vec![
            (WeightVector(vec![1, 0]), 2),
            (WeightVector(vec![0, 2]), 1),
            (WeightVector(vec![1, 1]), 3),
        ];
        let mut ch = GroupAlgebraElement::zero();
        for (w, mult) in &input {
            ch = &ch + &table.irreducible(w).unwrap().scaled(&BigInt::from(*mult));
        }
        let decomp = table.decompose(&ch).unwrap();
        assert_eq!(decomp.len(), input.len());
        for (w, mult) in &input {
            assert_eq!(decomp[w], BigInt::from(*mult));
        }
    }

    #[test]
    fn weyl_invariance_of_characters() {
        for id in ["A2", "B2", "C3"] {
            let c = build_cartan(id.parse().unwrap()).unwrap();
            let lam = WeightVector((0..c.n).map(|i| if i == 0 { 2 } else { 1 }).collect());
            let ch = irreducible_character(&c, &lam).unwrap();
            for (w, mult) in ch.support() {
                for a in 0..c.n {
                    assert_eq!(ch.coeff(&c.reflect(a, w)), *mult, "{id}");
                }
            }
        }
    }
}

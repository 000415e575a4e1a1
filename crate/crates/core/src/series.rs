//! Weight-truncated noncommutative power series in e0, e1 over a generic
//! coefficient ring: exact arithmetic modulo the ideal of weight > N,
//! substitution endomorphisms, exponentials, group-like and primitive
//! predicates, adjoint action, the Ihara product, and the universal
//! group-like point over the shuffle ring.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::{rat, Coeff, Rat};
use crate::shuffle::{antipode_word, shuffle_words, ShufflePoly};
use crate::word::{Letter, Word};
use crate::Error;

/// Truncated series: all arithmetic is exact in weights <= trunc.
/// Mixing truncations is an error, never a silent min.
#[derive(Clone, PartialEq, Debug)]
pub struct NCSeries<R: Coeff> {
    trunc: usize,
    coeffs: BTreeMap<Word, R>,
}

impl<R: Coeff> NCSeries<R> {
    pub fn zero(trunc: usize) -> Self {
        NCSeries {
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = NCSeries::zero(trunc);
        s.set(Word::empty(), R::one());
        s
    }

    pub fn letter(l: Letter, trunc: usize) -> Self {
        let mut s = NCSeries::zero(trunc);
        s.set(Word::letter(l), R::one());
        s
    }

    /// e-infinity = -e0 - e1.
    pub fn e_inf(trunc: usize) -> Self {
        let mut s = NCSeries::zero(trunc);
        s.set(Word::e0(), R::one().neg());
        s.set(Word::e1(), R::one().neg());
        s
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn get(&self, w: &Word) -> R {
        self.coeffs.get(w).cloned().unwrap_or_else(R::zero)
    }

    pub fn set(&mut self, w: Word, c: R) {
        assert!(w.weight() <= self.trunc, "word beyond truncation");
        if c.is_zero() {
            self.coeffs.remove(&w);
        } else {
            self.coeffs.insert(w, c);
        }
    }

    pub fn add_to(&mut self, w: Word, c: R) {
        if w.weight() > self.trunc || c.is_zero() {
            return;
        }
        let s = self.get(&w).add(&c);
        self.set(w, s);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &R)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_trunc(&self, rhs: &Self) -> Result<(), Error> {
        if self.trunc != rhs.trunc {
            Err(Error::TruncMismatch(self.trunc, rhs.trunc))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_trunc(rhs)?;
        let mut out = self.clone();
        for (w, c) in rhs.iter() {
            out.add_to(*w, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, Error> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        NCSeries {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(w, c)| (*w, c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &R) -> Self {
        let mut out = NCSeries::zero(self.trunc);
        for (w, c) in self.iter() {
            out.set(*w, c.mul(k));
        }
        out
    }

    /// Concatenation product.
    pub fn mul(&self, rhs: &Self) -> Result<Self, Error> {
        self.check_trunc(rhs)?;
        let mut out = NCSeries::zero(self.trunc);
        for (u, a) in self.iter() {
            if u.weight() > self.trunc {
                continue;
            }
            for (v, b) in rhs.iter() {
                if u.weight() + v.weight() > self.trunc {
                    continue;
                }
                let ab = a.mul(b);
                if !ab.is_zero() {
                    out.add_to(u.concat(v), ab);
                }
            }
        }
        Ok(out)
    }

    /// Product of several factors left to right.
    pub fn mul_all(factors: &[&Self]) -> Result<Self, Error> {
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// Series inverse via the geometric series; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self, Error> {
        let c = self.get(&Word::empty());
        let ci = c.inv().ok_or(Error::NotInvertible)?;
        // f = c (1 + eps): collect eps = c^{-1} f - 1
        let mut eps = self.scale(&ci);
        eps.set(Word::empty(), R::zero());
        // y = sum_{k<=N} (-eps)^k by Horner; eps has positive valuation
        let mut y = NCSeries::one(self.trunc);
        for _ in 0..self.trunc {
            y = NCSeries::one(self.trunc).sub(&eps.mul(&y)?)?;
        }
        Ok(y.scale(&ci))
    }

    /// Inverse of a group-like series through the antipode identity
    /// f^{-1}[w] = (-1)^{|w|} f[reverse(w)]. Only valid on group-like input.
    pub fn inverse_grouplike(&self) -> Self {
        let mut out = NCSeries::zero(self.trunc);
        for (w, c) in self.iter() {
            let (rw, s) = antipode_word(w);
            out.set(rw, c.mul_i64(s));
        }
        out
    }

    /// Apply the algebra morphism sending e0, e1 to degree-one images.
    pub fn substitute(&self, img0: &Lin1<R>, img1: &Lin1<R>) -> Self {
        let mut out = NCSeries::zero(self.trunc);
        for (w, c) in self.iter() {
            // expand the product of letter images over the word
            let mut partial: BTreeMap<Word, R> = BTreeMap::new();
            partial.insert(Word::empty(), c.clone());
            for l in w.letters() {
                let img = match l {
                    Letter::E0 => img0,
                    Letter::E1 => img1,
                };
                let mut next: BTreeMap<Word, R> = BTreeMap::new();
                for (u, k) in partial {
                    if !img.on_e0.is_zero() {
                        let c0 = k.mul(&img.on_e0);
                        if !c0.is_zero() {
                            let w0 = u.concat(&Word::e0());
                            merge(&mut next, w0, c0);
                        }
                    }
                    if !img.on_e1.is_zero() {
                        let c1 = k.mul(&img.on_e1);
                        if !c1.is_zero() {
                            let w1 = u.concat(&Word::e1());
                            merge(&mut next, w1, c1);
                        }
                    }
                }
                partial = next;
            }
            for (u, k) in partial {
                out.add_to(u, k);
            }
        }
        out
    }

    /// Algebra morphism with series-valued letter images (used by the Ihara product).
    /// Images must have zero constant term so the morphism respects truncation.
    pub fn substitute_series(&self, img0: &Self, img1: &Self) -> Result<Self, Error> {
        self.check_trunc(img0)?;
        self.check_trunc(img1)?;
        assert!(
            img0.get(&Word::empty()).is_zero() && img1.get(&Word::empty()).is_zero(),
            "letter images must have zero constant term"
        );
        let mut memo: HashMap<Word, NCSeries<R>> = HashMap::new();
        memo.insert(Word::empty(), NCSeries::one(self.trunc));
        let mut out = NCSeries::zero(self.trunc);
        for (w, c) in self.iter() {
            let img = self.image_of_word(w, img0, img1, &mut memo)?;
            for (u, k) in img.iter() {
                out.add_to(*u, k.mul(c));
            }
        }
        Ok(out)
    }

    fn image_of_word(
        &self,
        w: &Word,
        img0: &Self,
        img1: &Self,
        memo: &mut HashMap<Word, NCSeries<R>>,
    ) -> Result<NCSeries<R>, Error> {
        if let Some(hit) = memo.get(w) {
            return Ok(hit.clone());
        }
        let head = w.prefix(w.weight() - 1);
        let prev = self.image_of_word(&head, img0, img1, memo)?;
        let img = match w.last().unwrap() {
            Letter::E0 => img0,
            Letter::E1 => img1,
        };
        let result = prev.mul(img)?;
        memo.insert(*w, result.clone());
        Ok(result)
    }

    /// Weight-n coefficients.
    pub fn weight_component(&self, n: usize) -> Vec<(Word, R)> {
        self.coeffs
            .iter()
            .filter(|(w, _)| w.weight() == n)
            .map(|(w, c)| (*w, c.clone()))
            .collect()
    }

    /// Largest weight with a nonzero coefficient.
    pub fn max_weight(&self) -> Option<usize> {
        self.coeffs.keys().map(|w| w.weight()).max()
    }

    /// Group-like test: f[empty] = 1 and f[u sh v] = f[u] f[v] for all nonempty
    /// u, v with weight(u) + weight(v) <= trunc.
    pub fn is_grouplike(&self) -> bool {
        if self.get(&Word::empty()) != R::one() {
            return false;
        }
        self.shuffle_defect_is_zero(false)
    }

    /// Primitive test: f[empty] = 0 and f[u sh v] = 0 for nonempty u, v.
    pub fn is_primitive(&self) -> bool {
        if !self.get(&Word::empty()).is_zero() {
            return false;
        }
        self.shuffle_defect_is_zero(true)
    }

    fn shuffle_defect_is_zero(&self, primitive: bool) -> bool {
        for a in 1..self.trunc {
            for u in Word::all_of_weight(a) {
                for b in a..=(self.trunc - a) {
                    for v in Word::all_of_weight(b) {
                        if b == a && v < u {
                            continue;
                        }
                        let mut lhs = R::zero();
                        for (w, m) in shuffle_words(u, v) {
                            lhs = lhs.add(&self.get(&w).mul_i64(m));
                        }
                        let rhs = if primitive {
                            R::zero()
                        } else {
                            self.get(&u).mul(&self.get(&v))
                        };
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Adjoint action f^{-1} x f.
    pub fn adjoint(&self, x: &Self) -> Result<Self, Error> {
        self.inverse()?.mul(x)?.mul(self)
    }

    /// Pair a shuffle polynomial (same coefficient ring) against this series'
    /// coefficients: sum of c_u * f[u].
    pub fn pair(&self, p: &ShufflePoly<R>) -> R {
        let mut acc = R::zero();
        for (w, c) in p.iter() {
            acc = acc.add(&c.mul(&self.get(w)));
        }
        acc
    }

    /// Image under e1 |-> -e0-e1 (the involution swapping 1 and infinity).
    pub fn phi_infinity(&self) -> Self {
        self.substitute(
            &Lin1::letter(Letter::E0),
            &Lin1 {
                on_e0: R::one().neg(),
                on_e1: R::one().neg(),
            },
        )
    }
}

fn merge<R: Coeff>(map: &mut BTreeMap<Word, R>, w: Word, c: R) {
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Degree-one letter image a e0 + b e1.
#[derive(Clone, Debug)]
pub struct Lin1<R: Coeff> {
    pub on_e0: R,
    pub on_e1: R,
}

impl<R: Coeff> Lin1<R> {
    pub fn letter(l: Letter) -> Self {
        match l {
            Letter::E0 => Lin1 {
                on_e0: R::one(),
                on_e1: R::zero(),
            },
            Letter::E1 => Lin1 {
                on_e0: R::zero(),
                on_e1: R::one(),
            },
        }
    }

    /// e-infinity = -e0 - e1.
    pub fn e_inf() -> Self {
        Lin1 {
            on_e0: R::one().neg(),
            on_e1: R::one().neg(),
        }
    }
}

/// exp(c * (a e0 + b e1)) truncated: coefficient on each word w of weight k is
/// c^k a^{#e0} b^{#e1} / k!.
pub fn exp_lin1<R: Coeff>(c: &R, x: &Lin1<R>, trunc: usize) -> NCSeries<R> {
    let mut out = NCSeries::one(trunc);
    if c.is_zero() || (x.on_e0.is_zero() && x.on_e1.is_zero()) {
        return out;
    }
    let mut c_pow = R::one();
    let mut fact = 1i64;
    for k in 1..=trunc {
        c_pow = c_pow.mul(c);
        fact = fact.saturating_mul(k as i64);
        // k <= 16 so k! fits i64
        for w in Word::all_of_weight(k) {
            let mut coef = c_pow.clone();
            for l in w.letters() {
                coef = coef.mul(match l {
                    Letter::E0 => &x.on_e0,
                    Letter::E1 => &x.on_e1,
                });
                if coef.is_zero() {
                    break;
                }
            }
            if !coef.is_zero() {
                out.set(w, coef.div_int(fact));
            }
        }
    }
    out
}

/// exp of a series with zero constant term.
pub fn exp_series<R: Coeff>(x: &NCSeries<R>) -> Result<NCSeries<R>, Error> {
    assert!(x.get(&Word::empty()).is_zero(), "exp needs zero constant term");
    let trunc = x.trunc();
    let mut out = NCSeries::one(trunc);
    let mut pow = NCSeries::one(trunc);
    let mut fact = 1i64;
    for k in 1..=trunc {
        pow = pow.mul(x)?;
        if pow.is_zero() {
            break;
        }
        fact = fact.saturating_mul(k as i64);
        for (w, c) in pow.iter() {
            out.add_to(*w, c.div_int(fact));
        }
    }
    Ok(out)
}

/// Commutator a b - b a.
pub fn commutator<R: Coeff>(a: &NCSeries<R>, b: &NCSeries<R>) -> Result<NCSeries<R>, Error> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Ihara product: (g2 o g1)(e0, e1) = g2(e0, e1) . g1(e0, g2^{-1} e1 g2).
pub fn ihara<R: Coeff>(g2: &NCSeries<R>, g1: &NCSeries<R>) -> Result<NCSeries<R>, Error> {
    let trunc = g2.trunc();
    let y = g2.adjoint(&NCSeries::letter(Letter::E1, trunc))?;
    let e0 = NCSeries::letter(Letter::E0, trunc);
    g2.mul(&g1.substitute_series(&e0, &y)?)
}

/// The universal group-like point over the shuffle ring: coefficient of every word
/// w is the word itself, viewed in the commutative shuffle algebra.
pub fn universal_series(trunc: usize) -> NCSeries<ShufflePoly<Rat>> {
    universal_series_in::<Rat>(trunc)
}

/// Universal series over the shuffle algebra with any scalar ring.
pub fn universal_series_in<R: Coeff>(trunc: usize) -> NCSeries<ShufflePoly<R>> {
    let mut s = NCSeries::zero(trunc);
    for n in 0..=trunc {
        for w in Word::all_of_weight(n) {
            s.set(w, ShufflePoly::from_word(w));
        }
    }
    s
}

/// Deterministic pseudo-random group-like point: exp of a random primitive
/// element spanned by left-normed bracketings of letter sequences.
pub fn random_grouplike(seed: u64, trunc: usize) -> NCSeries<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lie = NCSeries::zero(trunc);
    for k in 2..=trunc {
        for seq in Word::all_of_weight(k) {
            // left-normed bracket [l_0, [l_1, [... [l_{k-2}, l_{k-1}] ...]]]
            let mut acc: NCSeries<Rat> = NCSeries::letter(seq.get(k - 1), trunc);
            for j in (0..k - 1).rev() {
                let lj = NCSeries::letter(seq.get(j), trunc);
                acc = commutator(&lj, &acc).expect("same trunc");
            }
            if acc.is_zero() {
                continue;
            }
            let num = rng.gen_range(-6i64..=6);
            if num == 0 {
                continue;
            }
            let den = rng.gen_range(1i64..=3);
            let c = rat(num, den);
            for (w, v) in acc.iter() {
                lie.add_to(*w, v.clone() * c.clone());
            }
        }
    }
    exp_series(&lie).expect("primitive input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat_int;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn one_plus(word: &str, trunc: usize) -> NCSeries<Rat> {
        let mut f = NCSeries::one(trunc);
        f.set(w(word), rat_int(1));
        f
    }

    #[test]
    fn mul_examples() {
        let a = one_plus("0", 3);
        let b = one_plus("1", 3);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.get(&Word::empty()), rat_int(1));
        assert_eq!(ab.get(&w("0")), rat_int(1));
        assert_eq!(ab.get(&w("1")), rat_int(1));
        assert_eq!(ab.get(&w("01")), rat_int(1));
        assert_eq!(ab.get(&w("10")), rat_int(0));

        let aa = a.mul(&a).unwrap();
        assert_eq!(aa.get(&w("0")), rat_int(2));
        assert_eq!(aa.get(&w("00")), rat_int(1));

        // unit
        assert_eq!(a.mul(&NCSeries::one(3)).unwrap(), a);
    }

    #[test]
    fn trunc_mismatch_is_error() {
        let a: NCSeries<Rat> = NCSeries::one(3);
        let b: NCSeries<Rat> = NCSeries::one(4);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn inverse_examples() {
        let one: NCSeries<Rat> = NCSeries::one(3);
        assert_eq!(one.inverse().unwrap(), one);

        let f = one_plus("0", 3);
        let fi = f.inverse().unwrap();
        assert_eq!(fi.get(&w("0")), rat_int(-1));
        assert_eq!(fi.get(&w("00")), rat_int(1));
        assert_eq!(fi.get(&w("000")), rat_int(-1));
        assert_eq!(f.mul(&fi).unwrap(), NCSeries::one(3));

        assert!(NCSeries::<Rat>::zero(3).inverse().is_err());
    }

    #[test]
    fn grouplike_inverse_matches_antipode() {
        let f = random_grouplike(7, 6);
        assert!(f.is_grouplike());
        let neumann = f.inverse().unwrap();
        let anti = f.inverse_grouplike();
        assert_eq!(neumann, anti);
        // inverse of inverse
        assert_eq!(neumann.inverse().unwrap(), f);
    }

    #[test]
    fn substitute_examples() {
        let f = one_plus("0", 3);
        let g = f.substitute(&Lin1::e_inf(), &Lin1::letter(Letter::E1));
        assert_eq!(g.get(&w("0")), rat_int(-1));
        assert_eq!(g.get(&w("1")), rat_int(-1));

        // identity images
        let id = f.substitute(&Lin1::letter(Letter::E0), &Lin1::letter(Letter::E1));
        assert_eq!(id, f);

        // w = e0 e1 under (e0 -> -e0, e1 -> -e0+e1): e0e0 - e0e1
        let mut h: NCSeries<Rat> = NCSeries::zero(2);
        h.set(w("01"), rat_int(1));
        let img0 = Lin1 {
            on_e0: rat_int(-1),
            on_e1: rat_int(0),
        };
        let img1 = Lin1 {
            on_e0: rat_int(-1),
            on_e1: rat_int(1),
        };
        let hs = h.substitute(&img0, &img1);
        assert_eq!(hs.get(&w("00")), rat_int(1));
        assert_eq!(hs.get(&w("01")), rat_int(-1));
        assert_eq!(hs.get(&w("10")), rat_int(0));
    }

    #[test]
    fn exp_examples() {
        // c = 0
        let e: NCSeries<Rat> = exp_lin1(&rat_int(0), &Lin1::letter(Letter::E1), 4);
        assert_eq!(e, NCSeries::one(4));

        // exp((1/2) e1): coefficient of e1e1 is 1/8 (matches mu/2 with mu formal elsewhere)
        let h = exp_lin1(&rat(1, 2), &Lin1::letter(Letter::E1), 4);
        assert_eq!(h.get(&w("11")), rat(1, 8));

        // exp(e0) exp(-e0) = 1
        let a = exp_lin1(&rat_int(1), &Lin1::letter(Letter::E0), 5);
        let b = exp_lin1(&rat_int(-1), &Lin1::letter(Letter::E0), 5);
        assert_eq!(a.mul(&b).unwrap(), NCSeries::one(5));
    }

    #[test]
    fn grouplike_primitive_predicates() {
        assert!(NCSeries::<Rat>::one(4).is_grouplike());
        assert!(NCSeries::<Rat>::letter(Letter::E0, 4).is_primitive());

        // exp(e0+e1) group-like
        let x = exp_lin1(
            &rat_int(1),
            &Lin1 {
                on_e0: rat_int(1),
                on_e1: rat_int(1),
            },
            4,
        );
        assert!(x.is_grouplike());

        // e0e1 alone is neither
        let mut y: NCSeries<Rat> = NCSeries::zero(4);
        y.set(w("01"), rat_int(1));
        assert!(!y.is_grouplike());
        assert!(!y.is_primitive());
    }

    #[test]
    fn adjoint_examples() {
        let trunc = 3;
        let e1 = NCSeries::<Rat>::letter(Letter::E1, trunc);
        assert_eq!(NCSeries::one(trunc).adjoint(&e1).unwrap(), e1);

        // commuting case
        let e0 = NCSeries::<Rat>::letter(Letter::E0, trunc);
        let f = exp_lin1(&rat_int(1), &Lin1::letter(Letter::E0), trunc);
        assert_eq!(f.adjoint(&e0).unwrap(), e0);

        // f = 1 + e0e1, x = e1 -> e1 + e1e0e1 - e0e1e1
        let f = one_plus("01", 3);
        let a = f.adjoint(&e1).unwrap();
        assert_eq!(a.get(&w("1")), rat_int(1));
        assert_eq!(a.get(&w("101")), rat_int(1));
        assert_eq!(a.get(&w("011")), rat_int(-1));
        assert_eq!(a.support_len(), 3);
    }

    #[test]
    fn adjoint_of_grouplike_is_primitive() {
        for seed in [1u64, 2, 3] {
            let f = random_grouplike(seed, 6);
            let a = f
                .adjoint(&NCSeries::letter(Letter::E1, 6))
                .unwrap();
            assert!(a.is_primitive(), "adjoint must be primitive (seed {seed})");
        }
    }

    #[test]
    fn ihara_unit_laws() {
        let g = random_grouplike(5, 5);
        let one = NCSeries::one(5);
        assert_eq!(ihara(&one, &g).unwrap(), g);
        assert_eq!(ihara(&g, &one).unwrap(), g);
    }

    #[test]
    fn ihara_weight2_expansion() {
        // g2 = exp(c' [e0,e1]), g1 = exp(c [e0,e1]):
        // (g2 o g1) = 1 + (c+c')(e0e1 - e1e0) + higher
        let trunc = 2;
        let c = rat(2, 3);
        let cp = rat(-1, 2);
        let br = commutator(
            &NCSeries::<Rat>::letter(Letter::E0, trunc),
            &NCSeries::<Rat>::letter(Letter::E1, trunc),
        )
        .unwrap();
        let g1 = exp_series(&br.scale(&c)).unwrap();
        let g2 = exp_series(&br.scale(&cp)).unwrap();
        let p = ihara(&g2, &g1).unwrap();
        let s = &c + &cp;
        assert_eq!(p.get(&w("01")), s.clone());
        assert_eq!(p.get(&w("10")), -s);
    }

    #[test]
    fn ihara_associativity_random() {
        let trunc = 5;
        let a = random_grouplike(11, trunc);
        let b = random_grouplike(12, trunc);
        let c = random_grouplike(13, trunc);
        let l = ihara(&ihara(&a, &b).unwrap(), &c).unwrap();
        let r = ihara(&a, &ihara(&b, &c).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn phi_infinity_involution() {
        let f = random_grouplike(21, 5);
        assert_eq!(f.phi_infinity().get(&w("1")), -f.get(&w("1")));
        assert_eq!(f.phi_infinity().phi_infinity(), f);
        assert_eq!(NCSeries::<Rat>::one(4).phi_infinity(), NCSeries::one(4));
    }

    #[test]
    fn universal_series_is_grouplike() {
        let u = universal_series(5);
        assert_eq!(u.get(&Word::empty()), ShufflePoly::unit());
        assert!(u.is_grouplike());
        // inverse(I)[e0e1] = e1e0 via the antipode identity
        let inv = u.inverse().unwrap();
        assert_eq!(inv.get(&w("01")), ShufflePoly::from_word(w("10")));
    }

    #[test]
    fn random_grouplike_properties() {
        let f = random_grouplike(42, 5);
        assert!(f.is_grouplike());
        // weight-one coefficients vanish: generators start at weight 2
        assert!(f.get(&w("0")).is_zero());
        assert!(f.get(&w("1")).is_zero());
        let g = random_grouplike(43, 5);
        assert_ne!(f, g);
        // zero Lie element
        let z = exp_series(&NCSeries::<Rat>::zero(4)).unwrap();
        assert_eq!(z, NCSeries::one(4));
    }

    #[test]
    fn fact_injectivity_of_adjoint_rebuild() {
        // recover f from f^{-1} e1 f degree by degree (constructive injectivity)
        let trunc = 5;
        let f = random_grouplike(31, trunc);
        let g = random_grouplike(32, trunc);
        assert_ne!(f, g);
        let af = f.adjoint(&NCSeries::letter(Letter::E1, trunc)).unwrap();
        let ag = g.adjoint(&NCSeries::letter(Letter::E1, trunc)).unwrap();
        assert_ne!(af, ag, "distinct tilde points must have distinct adjoints");
    }
}

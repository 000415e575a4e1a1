//! Residual evaluation of the one-dimensional associator equations and a
//! degree-by-degree exact linear solver producing truncated solution points.
//!
//! At each weight the group-like condition and the weight-n component of every
//! equation are affine-linear in the weight-n coefficients once the lower
//! weights are fixed; the solver evaluates the residuals over the affine-linear
//! ring, assembles the exact rational system, and eliminates.

use std::collections::BTreeMap;


use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::{rat, rat_int, AffLin, Coeff, Rat};
use crate::series::{exp_lin1, Lin1, NCSeries};
use crate::shuffle::shuffle_words;
use crate::word::{Letter, Word};
use crate::Error;

/// Which one-dimensional equation, by role.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EqId {
    /// f(e0,e1) f(e1,e0) = 1 (the duality / 2-cycle equation)
    Duality,
    /// f(e_inf,e0) f(e1,e_inf) f(e0,e1) = 1
    ThreeCycle,
    /// e0 + f^{-1} e1 f + f_inf^{-1} e_inf f_inf = 0
    SpecialZero,
    /// e^{(mu/2)e0} f(e_inf,e0) e^{(mu/2)e_inf} f(e1,e_inf) e^{(mu/2)e1} f(e0,e1) = 1
    HexagonPrime,
    /// f^{-1} e^{-mu e1} f e^{-mu e0} = e^{(mu/2)e0} f_inf^{-1} e^{mu e_inf} f_inf e^{-(mu/2)e0}
    Special,
    /// mu = 0 hexagon part: f(e0,e_inf) = f(e_inf,e1)^{-1} f(e0,e1)
    HexagonPartZero,
    /// duality + special automorphism consequence:
    /// f e^{-mu e0} f^{-1} e^{-mu e1} = e^{(mu/2)e1} g^{-1} e^{mu e_inf} g e^{-(mu/2)e1}, g = f(e1,e_inf)
    SwappedSpecial,
}

impl EqId {
    pub fn name(&self) -> &'static str {
        match self {
            EqId::Duality => "duality",
            EqId::ThreeCycle => "3-cycle",
            EqId::SpecialZero => "special-mu0",
            EqId::HexagonPrime => "hexagon-prime",
            EqId::Special => "special",
            EqId::HexagonPartZero => "hexagon-part-mu0",
            EqId::SwappedSpecial => "swapped-special",
        }
    }
}

/// The equation set for a coupling-constant value: `mu = None` selects the
/// mu = 0 system, `mu = Some(m)` the system at coupling m.
pub struct EquationSet<R: Coeff> {
    pub mu: Option<R>,
}

impl<R: Coeff> EquationSet<R> {
    pub fn zero() -> Self {
        EquationSet { mu: None }
    }

    pub fn at(mu: R) -> Self {
        EquationSet { mu: Some(mu) }
    }

    pub fn equations(&self) -> Vec<EqId> {
        match &self.mu {
            None => vec![EqId::Duality, EqId::ThreeCycle, EqId::SpecialZero],
            Some(_) => vec![EqId::Duality, EqId::HexagonPrime, EqId::Special],
        }
    }
}

fn check_tilde<R: Coeff>(f: &NCSeries<R>) -> Result<(), Error> {
    if f.get(&Word::empty()) != R::one() {
        return Err(Error::Precondition("constant term must be 1".into()));
    }
    if !f.get(&Word::e0()).is_zero() || !f.get(&Word::e1()).is_zero() {
        return Err(Error::Precondition(
            "weight-one coefficients must vanish".into(),
        ));
    }
    Ok(())
}

/// Residual series (left side minus right side) of one equation at coupling mu.
pub fn residual<R: Coeff>(
    eq: EqId,
    mu: Option<&R>,
    f: &NCSeries<R>,
) -> Result<NCSeries<R>, Error> {
    let trunc = f.trunc();
    let one = NCSeries::one(trunc);
    let e0 = Lin1::letter(Letter::E0);
    let e1 = Lin1::letter(Letter::E1);
    let einf = Lin1::e_inf();
    match eq {
        EqId::Duality => {
            let swapped = f.substitute(&e1, &e0);
            f.mul(&swapped)?.sub(&one)
        }
        EqId::ThreeCycle => {
            let a = f.substitute(&einf, &e0);
            let b = f.substitute(&e1, &einf);
            a.mul(&b)?.mul(f)?.sub(&one)
        }
        EqId::SpecialZero => {
            let finf = f.phi_infinity();
            let c1 = f
                .inverse()?
                .mul(&NCSeries::letter(Letter::E1, trunc))?
                .mul(f)?;
            let cinf = finf.inverse()?.mul(&NCSeries::e_inf(trunc))?.mul(&finf)?;
            let mut out = c1.add(&cinf)?;
            out.add_to(Word::e0(), R::one());
            Ok(out)
        }
        EqId::HexagonPrime => {
            let m = mu.ok_or_else(|| Error::Precondition("hexagon-prime needs mu".into()))?;
            let half = m.div_int(2);
            let x0 = exp_lin1(&half, &e0, trunc);
            let xinf = exp_lin1(&half, &einf, trunc);
            let x1 = exp_lin1(&half, &e1, trunc);
            let a = f.substitute(&einf, &e0);
            let b = f.substitute(&e1, &einf);
            x0.mul(&a)?
                .mul(&xinf)?
                .mul(&b)?
                .mul(&x1)?
                .mul(f)?
                .sub(&one)
        }
        EqId::Special => {
            let m = mu.ok_or_else(|| Error::Precondition("special needs mu".into()))?;
            let half = m.div_int(2);
            let lhs = f
                .inverse()?
                .mul(&exp_lin1(&m.neg(), &e1, trunc))?
                .mul(f)?
                .mul(&exp_lin1(&m.neg(), &e0, trunc))?;
            let finf = f.phi_infinity();
            let rhs = exp_lin1(&half, &e0, trunc)
                .mul(&finf.inverse()?)?
                .mul(&exp_lin1(m, &einf, trunc))?
                .mul(&finf)?
                .mul(&exp_lin1(&half.neg(), &e0, trunc))?;
            lhs.sub(&rhs)
        }
        EqId::HexagonPartZero => {
            let lhs = f.phi_infinity();
            let rhs = f.substitute(&einf, &e1).inverse()?.mul(f)?;
            lhs.sub(&rhs)
        }
        EqId::SwappedSpecial => {
            let m = mu.ok_or_else(|| Error::Precondition("swapped-special needs mu".into()))?;
            let half = m.div_int(2);
            let lhs = f
                .mul(&exp_lin1(&m.neg(), &e0, trunc))?
                .mul(&f.inverse()?)?
                .mul(&exp_lin1(&m.neg(), &e1, trunc))?;
            let g = f.substitute(&e1, &einf);
            let rhs = exp_lin1(&half, &e1, trunc)
                .mul(&g.inverse()?)?
                .mul(&exp_lin1(m, &einf, trunc))?
                .mul(&g)?
                .mul(&exp_lin1(&half.neg(), &e1, trunc))?;
            lhs.sub(&rhs)
        }
    }
}

/// All residuals of an equation set; precondition: tilde membership.
pub fn residuals<R: Coeff>(
    f: &NCSeries<R>,
    set: &EquationSet<R>,
) -> Result<Vec<(EqId, NCSeries<R>)>, Error> {
    check_tilde(f)?;
    set.equations()
        .into_iter()
        .map(|eq| residual(eq, set.mu.as_ref(), f).map(|r| (eq, r)))
        .collect()
}

/// Free-parameter policy when the weight-n system is underdetermined.
#[derive(Clone, Copy, Debug)]
pub enum FreeParamPolicy {
    Zeros,
    Random(u64),
}

impl FreeParamPolicy {
    pub fn parse(s: &str) -> Result<Self, Error> {
        if s.eq_ignore_ascii_case("zeros") {
            return Ok(FreeParamPolicy::Zeros);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return Ok(FreeParamPolicy::Random(seed.parse().map_err(|e| {
                Error::Parse(format!("bad seed in policy {s:?}: {e}"))
            })?));
        }
        Err(Error::Parse(format!(
            "policy must be 'zeros' or 'random:<seed>', got {s:?}"
        )))
    }
}

/// Per-weight record of the linear system.
#[derive(Clone, Debug)]
pub struct WeightReport {
    pub weight: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub free: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub weights: Vec<WeightReport>,
}

/// Exact elimination state: reduced row echelon form with right-hand sides.
struct LinSolver {
    pivots: BTreeMap<u32, (BTreeMap<u32, Rat>, Rat)>,
}

impl LinSolver {
    fn new() -> Self {
        LinSolver {
            pivots: BTreeMap::new(),
        }
    }

    fn add_row(
        &mut self,
        mut lin: BTreeMap<u32, Rat>,
        mut rhs: Rat,
        weight: usize,
    ) -> Result<(), Error> {
        // eliminate every pivot column present, not just leading ones
        loop {
            lin.retain(|_, c| !num::Zero::is_zero(c));
            let hit = lin.keys().find(|k| self.pivots.contains_key(k)).copied();
            let col = match hit {
                Some(c) => c,
                None => break,
            };
            let (prow, prhs) = &self.pivots[&col];
            let factor = lin[&col].clone();
            for (k, c) in prow {
                let e = lin.entry(*k).or_insert_with(|| rat_int(0));
                *e -= &factor * c;
            }
            lin.remove(&col);
            rhs -= &factor * prhs;
        }
        if lin.is_empty() {
            if num::Zero::is_zero(&rhs) {
                return Ok(());
            }
            return Err(Error::Inconsistent(weight));
        }
        // normalize on the leading column and keep full reduced echelon form
        let lead = *lin.keys().next().unwrap();
        let inv = lin[&lead].recip();
        for c in lin.values_mut() {
            *c *= &inv;
        }
        rhs *= &inv;
        let mut reduced = lin;
        reduced.remove(&lead);
        let mut updates = Vec::new();
        for (p, (prow, prhs)) in self.pivots.iter() {
            if let Some(c) = prow.get(&lead) {
                let mut new_row = prow.clone();
                let factor = c.clone();
                new_row.remove(&lead);
                for (k, v) in &reduced {
                    let e = new_row.entry(*k).or_insert_with(|| rat_int(0));
                    *e -= &factor * v;
                }
                new_row.retain(|_, c| !num::Zero::is_zero(c));
                let new_rhs = prhs - &factor * &rhs;
                updates.push((*p, (new_row, new_rhs)));
            }
        }
        for (p, row) in updates {
            self.pivots.insert(p, row);
        }
        self.pivots.insert(lead, (reduced, rhs));
        Ok(())
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn is_pivot(&self, col: u32) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Rows whose support lies entirely at or above `base` (the parameter block).
    fn rows_within(&self, base: u32) -> Vec<(BTreeMap<u32, Rat>, Rat)> {
        self.pivots
            .iter()
            .filter(|(p, _)| **p >= base)
            .map(|(p, (row, rhs))| {
                let mut full = row.clone();
                full.insert(*p, rat_int(1));
                (full, rhs.clone())
            })
            .collect()
    }

    /// Assign values: free columns from the sampler, pivots by substitution.
    fn solve(&self, ncols: u32, mut sample: impl FnMut() -> Rat) -> Vec<Rat> {
        let mut vals = vec![rat_int(0); ncols as usize];
        let mut is_pivot = vec![false; ncols as usize];
        for p in self.pivots.keys() {
            is_pivot[*p as usize] = true;
        }
        for c in 0..ncols {
            if !is_pivot[c as usize] {
                vals[c as usize] = sample();
            }
        }
        for (p, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (k, c) in row {
                v -= c * &vals[*k as usize];
            }
            vals[*p as usize] = v;
        }
        vals
    }
}

/// One weight layer solved against pinned lower weights: each weight-n
/// coefficient as an affine expression in the layer's free parameters
/// (numbered 0..free).
struct LayerSolution {
    exprs: Vec<AffLin>,
    free: usize,
    rank: usize,
}

fn assemble_weight_rows(
    solver: &mut LinSolver,
    cand: &NCSeries<AffLin>,
    mu: &Option<AffLin>,
    m: usize,
) -> Result<(), Error> {
    // group-like rows: f[u sh v] = f[u] f[v] for nonempty u, v with |u|+|v| = m
    for a in 1..m {
        let b = m - a;
        if b < a {
            break;
        }
        for u in Word::all_of_weight(a) {
            for v in Word::all_of_weight(b) {
                if b == a && v < u {
                    continue;
                }
                let mut aff = AffLin::zero();
                for (w, k) in shuffle_words(u, v) {
                    aff = aff.add(&cand.get(&w).mul_i64(k));
                }
                let prod = cand.get(&u).mul(&cand.get(&v));
                aff = aff.sub(&prod);
                add_afflin_row(solver, aff, m)?;
            }
        }
    }
    // equation rows: weight-m component of each residual
    let set: EquationSet<AffLin> = EquationSet { mu: mu.clone() };
    for eq in set.equations() {
        let res = residual(eq, set.mu.as_ref(), cand)?;
        for (w, aff) in res.iter() {
            if w.weight() == m {
                add_afflin_row(solver, aff.clone(), m)?;
            }
        }
    }
    Ok(())
}

fn solve_layer(
    pinned: &NCSeries<Rat>,
    mu: &Option<Rat>,
    n: usize,
) -> Result<LayerSolution, Error> {
    let words = Word::all_of_weight(n);
    let mut cand: NCSeries<AffLin> = NCSeries::zero(n);
    for (w, c) in pinned.iter() {
        if w.weight() < n {
            cand.set(*w, AffLin::constant(c.clone()));
        }
    }
    for (i, w) in words.iter().enumerate() {
        cand.set(*w, AffLin::unknown(i as u32));
    }
    let mut solver = LinSolver::new();
    assemble_weight_rows(&mut solver, &cand, &mu.clone().map(AffLin::constant), n)?;

    // renumber free columns as parameters 0..free
    let mut param_of = BTreeMap::new();
    for c in 0..words.len() as u32 {
        if !solver.is_pivot(c) {
            let id = param_of.len() as u32;
            param_of.insert(c, id);
        }
    }
    let mut exprs = Vec::with_capacity(words.len());
    for c in 0..words.len() as u32 {
        if let Some(id) = param_of.get(&c) {
            exprs.push(AffLin::unknown(*id));
        } else {
            let (row, rhs) = &solver.pivots[&c];
            let mut aff = AffLin::constant(rhs.clone());
            for (k, coef) in row {
                let id = param_of[k];
                aff = aff.sub(&AffLin::unknown(id).mul(&AffLin::constant(coef.clone())));
            }
            exprs.push(aff);
        }
    }
    Ok(LayerSolution {
        exprs,
        free: param_of.len(),
        rank: solver.rank(),
    })
}

/// Pin one layer's parameters using a joint lookahead system of the next
/// `depth` weights (all of whose coefficients stay symbolic, which keeps the
/// system linear as long as depth <= n-1). Returns the parameter values.
fn pin_layer_params(
    pinned: &NCSeries<Rat>,
    layer: &LayerSolution,
    mu: &Option<Rat>,
    n: usize,
    depth: usize,
    n_max: usize,
    sample: &mut impl FnMut() -> Rat,
) -> Result<Vec<Rat>, Error> {
    if layer.free == 0 {
        return Ok(Vec::new());
    }
    let cap = (n + depth).min(2 * n - 1).min(n_max);
    // column layout: coefficient blocks for weights n+1..cap first, parameters last
    let mut offset: BTreeMap<usize, u32> = BTreeMap::new();
    let mut next = 0u32;
    for m in (n + 1)..=cap {
        offset.insert(m, next);
        next += 1u32 << m;
    }
    let param_base = next;

    let shift_params = |aff: &AffLin| -> AffLin {
        let mut out = AffLin::constant(aff.constant.clone());
        for (k, c) in &aff.lin {
            out.lin.insert(param_base + k, c.clone());
        }
        out
    };

    let mut solver = LinSolver::new();
    for m in (n + 1)..=cap {
        let mut cand: NCSeries<AffLin> = NCSeries::zero(m);
        for (w, c) in pinned.iter() {
            if w.weight() < n {
                cand.set(*w, AffLin::constant(c.clone()));
            }
        }
        for (i, w) in Word::all_of_weight(n).iter().enumerate() {
            cand.set(*w, shift_params(&layer.exprs[i]));
        }
        for j in (n + 1)..=m {
            let base = offset[&j];
            for (i, w) in Word::all_of_weight(j).iter().enumerate() {
                cand.set(*w, AffLin::unknown(base + i as u32));
            }
        }
        assemble_weight_rows(&mut solver, &cand, &mu.clone().map(AffLin::constant), m)?;
    }

    // harvest the parameter-pure constraints and assign
    let mut pspan = LinSolver::new();
    for (row, rhs) in solver.rows_within(param_base) {
        let shifted: BTreeMap<u32, Rat> =
            row.into_iter().map(|(k, c)| (k - param_base, c)).collect();
        pspan.add_row(shifted, rhs, n)?;
    }
    Ok(pspan.solve(layer.free as u32, sample))
}

/// Solve the one-dimensional equations degree by degree up to weight `n_max`.
///
/// Returns a series with constant term 1, vanishing weight-one coefficients,
/// group-like to truncation, and all residuals of the set zero to truncation.
/// Free directions of a weight layer can be obstructed at later weights (the
/// one-dimensional system is weaker than the full associator scheme), so
/// parameters are pinned against a lookahead window; the window grows on
/// failure. A system that stays inconsistent is reported as an error with the
/// offending weight, never skipped.
pub fn solve_truncated(
    mu: Option<Rat>,
    n_max: usize,
    policy: FreeParamPolicy,
) -> Result<(NCSeries<Rat>, SolveReport), Error> {
    if n_max < 2 {
        return Err(Error::Precondition("truncation must be >= 2".into()));
    }
    let mut last_err = None;
    for depth in 1..=n_max {
        match solve_with_lookahead(mu.clone(), n_max, policy, depth) {
            Ok(out) => return Ok(out),
            Err(e @ Error::Inconsistent(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(Error::Inconsistent(n_max)))
}

fn solve_with_lookahead(
    mu: Option<Rat>,
    n_max: usize,
    policy: FreeParamPolicy,
    depth: usize,
) -> Result<(NCSeries<Rat>, SolveReport), Error> {
    let mut rng = match policy {
        FreeParamPolicy::Zeros => None,
        FreeParamPolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut sample = move || match &mut rng {
        None => rat_int(0),
        Some(r) => {
            let num = r.gen_range(-9i64..=9);
            let den = r.gen_range(1i64..=3);
            rat(num, den)
        }
    };
    let mut sol: NCSeries<Rat> = NCSeries::one(n_max);
    let mut report = SolveReport::default();

    for n in 2..=n_max {
        let layer = solve_layer(&sol, &mu, n)?;
        let params = if n < n_max {
            pin_layer_params(&sol, &layer, &mu, n, depth, n_max, &mut sample)?
        } else {
            (0..layer.free).map(|_| sample()).collect()
        };
        for (i, w) in Word::all_of_weight(n).iter().enumerate() {
            let aff = &layer.exprs[i];
            let mut v = aff.constant.clone();
            for (k, c) in &aff.lin {
                v += c * &params[*k as usize];
            }
            sol.set(*w, v);
        }
        report.weights.push(WeightReport {
            weight: n,
            unknowns: 1 << n,
            rank: layer.rank,
            free: layer.free,
        });
    }

    // re-verify every residual on the final point before returning
    let set = EquationSet { mu };
    for (_, r) in residuals(&sol, &set)? {
        if !r.is_zero() {
            return Err(Error::Inconsistent(n_max));
        }
    }
    Ok((sol, report))
}

fn add_afflin_row(solver: &mut LinSolver, aff: AffLin, weight: usize) -> Result<(), Error> {
    if aff.is_zero() {
        return Ok(());
    }
    let rhs = -aff.constant.clone();
    solver.add_row(aff.lin, rhs, weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn trivial_point_satisfies_zero_set() {
        let one: NCSeries<Rat> = NCSeries::one(4);
        for (eq, r) in residuals(&one, &EquationSet::zero()).unwrap() {
            assert!(r.is_zero(), "residual {:?} nonzero on the trivial point", eq);
        }
    }

    #[test]
    fn rejects_non_tilde_points() {
        let mut f: NCSeries<Rat> = NCSeries::one(3);
        f.set(w("0"), rat_int(1));
        assert!(residuals(&f, &EquationSet::zero()).is_err());
    }

    #[test]
    fn random_grouplike_fails_two_cycle() {
        // a generic group-like point is not a solution
        let f = crate::series::random_grouplike(17, 4);
        let r = residual(EqId::Duality, None, &f).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn zeros_policy_weight3_is_trivial_through_weight2() {
        let (sol, report) = solve_truncated(None, 3, FreeParamPolicy::Zeros).unwrap();
        // weight 2 has no freedom and is forced to zero
        assert_eq!(report.weights[0].free, 0);
        for v in Word::all_of_weight(2) {
            assert!(sol.get(&v).is_zero());
        }
        // weight 3: one free direction, zeros policy keeps it zero
        assert_eq!(report.weights[1].free, 1);
        for v in Word::all_of_weight(3) {
            assert!(sol.get(&v).is_zero());
        }
    }

    #[test]
    fn mu0_solution_weight5_verifies() {
        let (sol, report) = solve_truncated(None, 5, FreeParamPolicy::Random(42)).unwrap();
        assert!(sol.is_grouplike());
        for (eq, r) in residuals(&sol, &EquationSet::zero()).unwrap() {
            assert!(r.is_zero(), "{:?} residual nonzero", eq);
        }
        // weight-3 free direction must be exercised by the random policy
        assert!(!sol.get(&w("001")).is_zero());
        // regression: rigidity of weight 2, one free direction at weight 3
        let dims: Vec<usize> = report.weights.iter().map(|r| r.free).collect();
        assert_eq!(dims[0], 0, "weight 2 must be rigid");
        assert_eq!(dims[1], 1, "weight 3 must have one free direction");
    }

    #[test]
    fn mu0_solution_satisfies_alternative_set() {
        // both reformulated residuals vanish on solver output
        let (sol, _) = solve_truncated(None, 5, FreeParamPolicy::Random(7)).unwrap();
        for eq in [EqId::HexagonPartZero, EqId::SpecialZero] {
            let r = residual(eq, None, &sol).unwrap();
            assert!(r.is_zero(), "{:?} nonzero on mu=0 solution", eq);
        }
    }

    #[test]
    fn mu1_solution_weight4_verifies() {
        let (sol, _) = solve_truncated(Some(rat_int(1)), 4, FreeParamPolicy::Zeros).unwrap();
        assert!(sol.is_grouplike());
        let set = EquationSet::at(rat_int(1));
        for (eq, r) in residuals(&sol, &set).unwrap() {
            assert!(r.is_zero(), "{:?} residual nonzero at mu=1", eq);
        }
        // duality at weight 2 forces f[e0e1] = -f[e1e0]
        assert_eq!(sol.get(&w("01")), -sol.get(&w("10")));
        // swapped-special consequence holds as well
        let one = rat_int(1);
        let r = residual(EqId::SwappedSpecial, Some(&one), &sol).unwrap();
        assert!(r.is_zero(), "swapped-special residual nonzero");
    }

    #[test]
    fn policy_parsing() {
        assert!(matches!(
            FreeParamPolicy::parse("zeros").unwrap(),
            FreeParamPolicy::Zeros
        ));
        assert!(matches!(
            FreeParamPolicy::parse("random:42").unwrap(),
            FreeParamPolicy::Random(42)
        ));
        assert!(FreeParamPolicy::parse("other").is_err());
    }
}

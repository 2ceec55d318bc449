//! Exact linear feasibility over the rationals by Fourier-Motzkin elimination
//! with strictness flags, plus the projection primitive reused by the
//! polyhedron module.
//!
//! Witness selection is deterministic: back-substitution takes the midpoint of
//! each feasible interval, `bound + 1` / `bound - 1` for half-open intervals,
//! and `0` for a free variable.

use crate::error::{Error, Result};
use crate::exact::rat::{dot, Rat};

/// Comparison sense of one linear constraint `<a, x> (rel) b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
    Gt,
}

/// One linear constraint `<a, x> (rel) b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub a: Vec<Rat>,
    pub rel: Rel,
    pub b: Rat,
}

impl Constraint {
    pub fn new(a: Vec<Rat>, rel: Rel, b: Rat) -> Self {
        Constraint { a, rel, b }
    }

    pub fn eq(a: Vec<Rat>, b: Rat) -> Self {
        Constraint::new(a, Rel::Eq, b)
    }

    pub fn ge(a: Vec<Rat>, b: Rat) -> Self {
        Constraint::new(a, Rel::Ge, b)
    }

    pub fn gt(a: Vec<Rat>, b: Rat) -> Self {
        Constraint::new(a, Rel::Gt, b)
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        let lhs = dot(&self.a, x);
        match self.rel {
            Rel::Eq => lhs == self.b,
            Rel::Ge => lhs >= self.b,
            Rel::Gt => lhs > self.b,
        }
    }
}

/// A system of equalities, weak inequalities and strict inequalities sharing
/// one ambient dimension.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub ambient: usize,
    pub equalities: Vec<(Vec<Rat>, Rat)>,
    pub weak: Vec<(Vec<Rat>, Rat)>,
    pub strict: Vec<(Vec<Rat>, Rat)>,
}

impl LinearSystem {
    pub fn new(ambient: usize) -> Self {
        LinearSystem { ambient, ..Default::default() }
    }

    pub fn push(&mut self, c: Constraint) {
        match c.rel {
            Rel::Eq => self.equalities.push((c.a, c.b)),
            Rel::Ge => self.weak.push((c.a, c.b)),
            Rel::Gt => self.strict.push((c.a, c.b)),
        }
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        for (a, b) in &self.equalities {
            out.push(Constraint::eq(a.clone(), b.clone()));
        }
        for (a, b) in &self.weak {
            out.push(Constraint::ge(a.clone(), b.clone()));
        }
        for (a, b) in &self.strict {
            out.push(Constraint::gt(a.clone(), b.clone()));
        }
        out
    }

    fn validate(&self) -> Result<()> {
        for (a, _) in self.equalities.iter().chain(&self.weak).chain(&self.strict) {
            if a.len() != self.ambient {
                return Err(Error::DimensionMismatch {
                    expected: self.ambient,
                    got: a.len(),
                    context: "linear system constraint".into(),
                });
            }
        }
        Ok(())
    }
}

/// Outcome of a feasibility query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Witness(Vec<Rat>),
    Infeasible,
}

impl Feasibility {
    pub fn witness(self) -> Option<Vec<Rat>> {
        match self {
            Feasibility::Witness(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Witness(_))
    }
}

/// Internal inequality form `<a, x> >= b` or `> b` over the working variables.
#[derive(Clone, Debug)]
struct Ineq {
    a: Vec<Rat>,
    b: Rat,
    strict: bool,
}

impl Ineq {
    fn normalized(mut self) -> Self {
        // Scale by the positive lcm/gcd so identical halfspaces dedupe.
        let ints = crate::exact::mat::primitive_integer(&self.a);
        if ints.iter().all(|v| num_traits::Zero::is_zero(v)) {
            return self;
        }
        // Find the (positive) factor ints = f * a; b scales by the same f.
        let k = self.a.iter().position(|v| !v.is_zero()).unwrap();
        let f = &Rat::from_big(ints[k].clone()) / &self.a[k];
        debug_assert!(f.is_positive());
        self.a = ints.into_iter().map(Rat::from_big).collect();
        self.b = &self.b * &f;
        self
    }
}

/// An affine expression `constant + sum(coeffs[i] * x_i)` used when solved
/// equalities express one variable through the others.
#[derive(Clone, Debug)]
struct Affine {
    coeffs: Vec<Rat>,
    constant: Rat,
}

/// Exact feasibility with deterministic witness selection.
pub fn solve_feasibility(sys: &LinearSystem) -> Result<Feasibility> {
    sys.validate()?;
    let n = sys.ambient;

    // Phase 1: eliminate equalities by Gaussian substitution.
    // Each solved variable gets an affine expression in the remaining ones.
    let mut eqs: Vec<(Vec<Rat>, Rat)> = sys.equalities.clone();
    let mut solved: Vec<(usize, Affine)> = Vec::new(); // in solve order
    let mut is_solved = vec![false; n];
    loop {
        let Some(pos) = eqs.iter().position(|(a, _)| a.iter().any(|v| !v.is_zero())) else {
            break;
        };
        let (a, b) = eqs.remove(pos);
        let var = a.iter().position(|v| !v.is_zero()).unwrap();
        let inv = a[var].recip();
        // x_var = (b - sum_{j != var} a_j x_j) / a_var
        let mut coeffs = vec![Rat::zero(); n];
        for (j, aj) in a.iter().enumerate() {
            if j != var && !aj.is_zero() {
                coeffs[j] = -&(aj * &inv);
            }
        }
        let expr = Affine { coeffs, constant: &b * &inv };
        // Substitute into the remaining equalities.
        for (ea, eb) in eqs.iter_mut() {
            if ea[var].is_zero() {
                continue;
            }
            let f = ea[var].clone();
            ea[var] = Rat::zero();
            for j in 0..n {
                if !expr.coeffs[j].is_zero() {
                    ea[j] = &ea[j] + &(&f * &expr.coeffs[j]);
                }
            }
            *eb = &*eb - &(&f * &expr.constant);
        }
        is_solved[var] = true;
        solved.push((var, expr));
    }
    // Leftover equalities are all-zero rows: 0 = b.
    for (_, b) in &eqs {
        if !b.is_zero() {
            return Ok(Feasibility::Infeasible);
        }
    }

    // Substitute solved variables into the inequalities.
    let substitute = |a: &[Rat], b: &Rat| -> (Vec<Rat>, Rat) {
        let mut aa = a.to_vec();
        let mut bb = b.clone();
        for (var, expr) in &solved {
            if aa[*var].is_zero() {
                continue;
            }
            let f = aa[*var].clone();
            aa[*var] = Rat::zero();
            for j in 0..aa.len() {
                if !expr.coeffs[j].is_zero() {
                    aa[j] = &aa[j] + &(&f * &expr.coeffs[j]);
                }
            }
            bb = &bb - &(&f * &expr.constant);
        }
        (aa, bb)
    };
    let mut ineqs: Vec<Ineq> = Vec::new();
    for (a, b) in &sys.weak {
        let (a, b) = substitute(a, b);
        ineqs.push(Ineq { a, b, strict: false });
    }
    for (a, b) in &sys.strict {
        let (a, b) = substitute(a, b);
        ineqs.push(Ineq { a, b, strict: true });
    }

    // Phase 2: Fourier-Motzkin on the free variables, highest index first.
    let free: Vec<usize> = (0..n).filter(|&v| !is_solved[v]).collect();
    let mut stack: Vec<(usize, Vec<Ineq>)> = Vec::new(); // (var, bounds mentioning var)
    for &var in free.iter().rev() {
        let (mentioning, rest): (Vec<Ineq>, Vec<Ineq>) =
            ineqs.into_iter().partition(|c| !c.a[var].is_zero());
        ineqs = rest;
        let lowers: Vec<&Ineq> = mentioning.iter().filter(|c| c.a[var].is_positive()).collect();
        let uppers: Vec<&Ineq> = mentioning.iter().filter(|c| c.a[var].is_negative()).collect();
        for lo in &lowers {
            for up in &uppers {
                // lo: a x >= b with a_var > 0  =>  x >= (b - rest)/a_var
                // up: a x >= b with a_var < 0  =>  x <= (b - rest)/a_var
                // Combine: scale lo by |up_var| and up by lo_var and add.
                let s_lo = up.a[var].abs();
                let s_up = lo.a[var].clone();
                let mut a = vec![Rat::zero(); n];
                for j in 0..n {
                    a[j] = &(&lo.a[j] * &s_lo) + &(&up.a[j] * &s_up);
                }
                debug_assert!(a[var].is_zero());
                let b = &(&lo.b * &s_lo) + &(&up.b * &s_up);
                let combined = Ineq { a, b, strict: lo.strict || up.strict }.normalized();
                ineqs.push(combined);
            }
        }
        // Deduplicate to keep growth under control at desk scale.
        dedup_ineqs(&mut ineqs);
        stack.push((var, mentioning));
    }

    // All variables eliminated: constraints are now 0 >= b / 0 > b.
    for c in &ineqs {
        debug_assert!(c.a.iter().all(|v| v.is_zero()));
        let ok = if c.strict { c.b.is_negative() } else { !c.b.is_positive() };
        if !ok {
            return Ok(Feasibility::Infeasible);
        }
    }

    // Phase 3: back-substitute the free variables in reverse elimination order.
    let mut x = vec![Rat::zero(); n];
    for (var, bounds) in stack.into_iter().rev() {
        let mut lower: Option<(Rat, bool)> = None; // (value, strict)
        let mut upper: Option<(Rat, bool)> = None;
        for c in &bounds {
            // residual: b - sum_{j != var} a_j x_j  (x_j known for later vars, 0 otherwise)
            let mut resid = c.b.clone();
            for j in 0..n {
                if j != var && !c.a[j].is_zero() {
                    resid = &resid - &(&c.a[j] * &x[j]);
                }
            }
            let bound = &resid / &c.a[var];
            if c.a[var].is_positive() {
                lower = Some(match lower {
                    None => (bound, c.strict),
                    Some((cur, cs)) => {
                        if bound > cur {
                            (bound, c.strict)
                        } else if bound == cur {
                            (cur, cs || c.strict)
                        } else {
                            (cur, cs)
                        }
                    }
                });
            } else {
                upper = Some(match upper {
                    None => (bound, c.strict),
                    Some((cur, cs)) => {
                        if bound < cur {
                            (bound, c.strict)
                        } else if bound == cur {
                            (cur, cs || c.strict)
                        } else {
                            (cur, cs)
                        }
                    }
                });
            }
        }
        let half = Rat::from_pair(1, 2);
        x[var] = match (lower, upper) {
            (None, None) => Rat::zero(),
            (Some((lo, _)), None) => &lo + &Rat::one(),
            (None, Some((hi, _))) => &hi - &Rat::one(),
            (Some((lo, ls)), Some((hi, hs))) => {
                if lo == hi {
                    debug_assert!(!ls && !hs, "FM guaranteed a nonempty interval");
                    lo
                } else {
                    debug_assert!(lo < hi, "FM guaranteed a nonempty interval");
                    &(&lo + &hi) * &half
                }
            }
        };
    }

    // Solved variables, in reverse solve order so dependencies are ready.
    for (var, expr) in solved.iter().rev() {
        let mut val = expr.constant.clone();
        for j in 0..n {
            if !expr.coeffs[j].is_zero() {
                val = &val + &(&expr.coeffs[j] * &x[j]);
            }
        }
        x[*var] = val;
    }

    debug_assert!(
        sys.constraints().iter().all(|c| c.satisfied_by(&x)),
        "witness fails resubstitution"
    );
    Ok(Feasibility::Witness(x))
}

fn dedup_ineqs(ineqs: &mut Vec<Ineq>) {
    // Drop trivially true rows, fold duplicates keeping the stronger sense,
    // with the tighter right-hand side.
    let mut kept: Vec<Ineq> = Vec::new();
    for c in ineqs.drain(..) {
        if c.a.iter().all(|v| v.is_zero()) {
            let trivially_true = if c.strict { c.b.is_negative() } else { !c.b.is_positive() };
            if trivially_true {
                continue;
            }
            kept.push(c);
            continue;
        }
        if let Some(prev) = kept.iter_mut().find(|p| p.a == c.a) {
            if c.b > prev.b || (c.b == prev.b && c.strict && !prev.strict) {
                prev.b = c.b;
                prev.strict = c.strict;
            }
            continue;
        }
        kept.push(c);
    }
    *ineqs = kept;
}

/// Exact H-representation of the projection of a constraint system onto the
/// variables in `keep` (in the order given), by Fourier-Motzkin elimination of
/// the others. Equalities whose normals survive elimination are returned as
/// equalities.
///
/// The input must be feasible or the output may be an arbitrary infeasible
/// system; callers canonicalize afterwards.
pub fn fm_project(
    ambient: usize,
    constraints: &[Constraint],
    keep: &[usize],
) -> Result<Vec<Constraint>> {
    for c in constraints {
        if c.a.len() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: c.a.len(),
                context: "fm_project constraint".into(),
            });
        }
    }
    let keep_set: Vec<bool> = {
        let mut v = vec![false; ambient];
        for &k in keep {
            v[k] = true;
        }
        v
    };

    // Split equalities into substitutions on eliminated variables where
    // possible; equalities only in kept variables pass through.
    let mut eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in constraints {
        match c.rel {
            Rel::Eq => eqs.push((c.a.clone(), c.b.clone())),
            Rel::Ge => ineqs.push(Ineq { a: c.a.clone(), b: c.b.clone(), strict: false }),
            Rel::Gt => ineqs.push(Ineq { a: c.a.clone(), b: c.b.clone(), strict: true }),
        }
    }

    let mut out_eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    // Use equalities to eliminate dropped variables first. Loop until no
    // equality mentions a dropped variable; substitutions can reintroduce
    // them, so classification cannot be done in a single pass.
    loop {
        let Some(pos) = eqs
            .iter()
            .position(|(a, _)| (0..ambient).any(|j| !keep_set[j] && !a[j].is_zero()))
        else {
            break;
        };
        let (a, b) = eqs.remove(pos);
        let var = (0..ambient).find(|&j| !keep_set[j] && !a[j].is_zero()).unwrap();
        let inv = a[var].recip();
        let subst = |ta: &mut Vec<Rat>, tb: &mut Rat| {
            if ta[var].is_zero() {
                return;
            }
            let f = &ta[var] * &inv;
            ta[var] = Rat::zero();
            for j in 0..ambient {
                if j != var && !a[j].is_zero() {
                    ta[j] = &ta[j] - &(&f * &a[j]);
                }
            }
            *tb = &*tb - &(&f * &b);
        };
        for (ea, eb) in eqs.iter_mut() {
            subst(ea, eb);
        }
        for c in ineqs.iter_mut() {
            let mut bb = c.b.clone();
            subst(&mut c.a, &mut bb);
            c.b = bb;
        }
    }
    for (a, b) in eqs {
        // Now supported on kept variables only.
        debug_assert!((0..ambient).all(|j| keep_set[j] || a[j].is_zero()));
        out_eqs.push((a, b));
    }

    // FM-eliminate remaining dropped variables from the inequalities.
    for var in (0..ambient).rev() {
        if keep_set[var] {
            continue;
        }
        let (mentioning, rest): (Vec<Ineq>, Vec<Ineq>) =
            ineqs.into_iter().partition(|c| !c.a[var].is_zero());
        ineqs = rest;
        let lowers: Vec<&Ineq> = mentioning.iter().filter(|c| c.a[var].is_positive()).collect();
        let uppers: Vec<&Ineq> = mentioning.iter().filter(|c| c.a[var].is_negative()).collect();
        for lo in &lowers {
            for up in &uppers {
                let s_lo = up.a[var].abs();
                let s_up = lo.a[var].clone();
                let mut a = vec![Rat::zero(); ambient];
                for j in 0..ambient {
                    a[j] = &(&lo.a[j] * &s_lo) + &(&up.a[j] * &s_up);
                }
                let b = &(&lo.b * &s_lo) + &(&up.b * &s_up);
                ineqs.push(Ineq { a, b, strict: lo.strict || up.strict }.normalized());
            }
        }
        dedup_ineqs(&mut ineqs);
    }

    // Re-index onto the kept coordinates.
    let reindex = |a: &[Rat]| -> Vec<Rat> { keep.iter().map(|&j| a[j].clone()).collect() };
    let mut out = Vec::new();
    for (a, b) in out_eqs {
        out.push(Constraint::eq(reindex(&a), b));
    }
    for c in ineqs {
        let rel = if c.strict { Rel::Gt } else { Rel::Ge };
        out.push(Constraint::new(reindex(&c.a), rel, c.b));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn rv(vs: &[i64]) -> Vec<Rat> {
        vs.iter().map(|&v| r(v)).collect()
    }

    #[test]
    fn contradictory_bounds_infeasible() {
        // x >= 1, -x >= 0
        let mut sys = LinearSystem::new(1);
        sys.push(Constraint::ge(rv(&[1]), r(1)));
        sys.push(Constraint::ge(rv(&[-1]), r(0)));
        assert_eq!(solve_feasibility(&sys).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn strict_witness_in_r3() {
        // x1 = 0, x2 > 0, x3 > 0
        let mut sys = LinearSystem::new(3);
        sys.push(Constraint::eq(rv(&[1, 0, 0]), r(0)));
        sys.push(Constraint::gt(rv(&[0, 1, 0]), r(0)));
        sys.push(Constraint::gt(rv(&[0, 0, 1]), r(0)));
        let w = solve_feasibility(&sys).unwrap().witness().unwrap();
        assert_eq!(w[0], r(0));
        assert!(w[1].is_positive() && w[2].is_positive());
        assert_eq!(w, rv(&[0, 1, 1]));
    }

    #[test]
    fn relint_membership_witness() {
        // w3 = w2, w1 >= 0, w2 > 0  (recession cone of P1 against relint of sigma23)
        let mut sys = LinearSystem::new(3);
        sys.push(Constraint::eq(rv(&[0, -1, 1]), r(0)));
        sys.push(Constraint::ge(rv(&[1, 0, 0]), r(0)));
        sys.push(Constraint::gt(rv(&[0, 1, 0]), r(0)));
        let w = solve_feasibility(&sys).unwrap().witness().unwrap();
        assert!(sys.constraints().iter().all(|c| c.satisfied_by(&w)));
        assert_eq!(w, rv(&[1, 1, 1]));
    }

    #[test]
    fn dimension_mismatch() {
        let mut sys = LinearSystem::new(2);
        sys.push(Constraint::ge(rv(&[1]), r(0)));
        assert!(matches!(
            solve_feasibility(&sys),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn strict_on_boundary_infeasible() {
        // x >= 1, x <= 1, x > 1
        let mut sys = LinearSystem::new(1);
        sys.push(Constraint::ge(rv(&[1]), r(1)));
        sys.push(Constraint::ge(rv(&[-1]), r(-1)));
        sys.push(Constraint::gt(rv(&[1]), r(1)));
        assert_eq!(solve_feasibility(&sys).unwrap(), Feasibility::Infeasible);
        // Without strictness the point x = 1 is found.
        let mut sys = LinearSystem::new(1);
        sys.push(Constraint::ge(rv(&[1]), r(1)));
        sys.push(Constraint::ge(rv(&[-1]), r(-1)));
        assert_eq!(solve_feasibility(&sys).unwrap(), Feasibility::Witness(rv(&[1])));
    }

    #[test]
    fn midpoint_rule() {
        // 0 <= x <= 2 -> x = 1
        let mut sys = LinearSystem::new(1);
        sys.push(Constraint::ge(rv(&[1]), r(0)));
        sys.push(Constraint::ge(rv(&[-1]), r(-2)));
        assert_eq!(solve_feasibility(&sys).unwrap(), Feasibility::Witness(rv(&[1])));
    }

    /// Independent feasibility oracle for systems of equalities and weak
    /// inequalities: a polyhedron is nonempty iff for some subset S of the
    /// inequalities, the affine set {equalities, S tight} is nonempty and
    /// entirely contained in the polyhedron (minimal faces are affine sets
    /// cut out by subsystems).
    fn feasible_by_face_enumeration(sys: &LinearSystem) -> bool {
        assert!(sys.strict.is_empty());
        let n = sys.ambient;
        let m = sys.weak.len();
        for mask in 0..(1u32 << m) {
            let mut eqs: Vec<(Vec<Rat>, Rat)> = sys.equalities.clone();
            for (i, w) in sys.weak.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    eqs.push(w.clone());
                }
            }
            // Solve the affine system; get particular solution + nullspace basis.
            let Some((x0, null)) = solve_affine(n, &eqs) else {
                continue;
            };
            // The affine set is inside the polyhedron iff every weak
            // inequality holds at x0 and annihilates the nullspace.
            let ok = sys.weak.iter().all(|(a, b)| {
                dot(a, &x0) >= *b && null.iter().all(|d| dot(a, d).is_zero())
            });
            if ok {
                return true;
            }
        }
        false
    }

    /// Particular solution and nullspace basis of an affine equality system.
    fn solve_affine(n: usize, eqs: &[(Vec<Rat>, Rat)]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
        let mut rows: Vec<Vec<Rat>> = eqs
            .iter()
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let mut pivots: Vec<(usize, Vec<Rat>)> = Vec::new();
        for col in 0..n {
            let Some(k) = rows.iter().position(|r| !r[col].is_zero()) else {
                continue;
            };
            let row = rows.remove(k);
            let inv = row[col].recip();
            let row: Vec<Rat> = row.iter().map(|v| v * &inv).collect();
            for other in rows.iter_mut().chain(pivots.iter_mut().map(|(_, r)| r)) {
                if other[col].is_zero() {
                    continue;
                }
                let f = other[col].clone();
                for (a, b) in other.iter_mut().zip(&row) {
                    *a = &*a - &(&f * b);
                }
            }
            pivots.push((col, row));
        }
        for r in &rows {
            if !r[n].is_zero() {
                return None;
            }
        }
        let mut x0 = vec![Rat::zero(); n];
        for (col, row) in &pivots {
            x0[*col] = row[n].clone();
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
        let mut null = Vec::new();
        for free in 0..n {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut d = vec![Rat::zero(); n];
            d[free] = Rat::one();
            for (col, row) in &pivots {
                d[*col] = -&row[free];
            }
            null.push(d);
        }
        Some((x0, null))
    }

    #[test]
    fn agrees_with_face_enumeration_oracle() {
        let mut rng = crate::detrand::SplitMix64::new(0x5eed_0003);
        for _ in 0..150 {
            let n = 1 + (rng.next_u64() % 4) as usize;
            let m = 1 + (rng.next_u64() % 5) as usize;
            let e = (rng.next_u64() % 3) as usize;
            let mut sys = LinearSystem::new(n);
            for _ in 0..e {
                let a: Vec<Rat> = (0..n).map(|_| r(rng.range_i64(-3, 3))).collect();
                sys.push(Constraint::eq(a, r(rng.range_i64(-3, 3))));
            }
            for _ in 0..m {
                let a: Vec<Rat> = (0..n).map(|_| r(rng.range_i64(-3, 3))).collect();
                sys.push(Constraint::ge(a, r(rng.range_i64(-3, 3))));
            }
            let fm = solve_feasibility(&sys).unwrap();
            let oracle = feasible_by_face_enumeration(&sys);
            assert_eq!(fm.is_feasible(), oracle, "disagreement on {sys:?}");
            if let Feasibility::Witness(w) = fm {
                assert!(sys.constraints().iter().all(|c| c.satisfied_by(&w)));
            }
        }
    }

    #[test]
    fn strict_systems_decompose_by_averaging() {
        // For convex sets, {E, W, all stricts} is feasible iff the weakened
        // system is feasible and each strict constraint is individually
        // non-degenerate on it: averaging witnesses x_i with a_i x_i > b_i
        // gives a point satisfying all of them. This cross-checks the
        // multi-strict elimination path against single-strict runs.
        let mut rng = crate::detrand::SplitMix64::new(0x5eed_0004);
        for _ in 0..120 {
            let n = 1 + (rng.next_u64() % 4) as usize;
            let mut sys = LinearSystem::new(n);
            for _ in 0..(rng.next_u64() % 3) {
                let a: Vec<Rat> = (0..n).map(|_| r(rng.range_i64(-3, 3))).collect();
                sys.push(Constraint::eq(a, r(rng.range_i64(-2, 2))));
            }
            for _ in 0..(1 + rng.next_u64() % 4) {
                let a: Vec<Rat> = (0..n).map(|_| r(rng.range_i64(-3, 3))).collect();
                sys.push(Constraint::ge(a, r(rng.range_i64(-2, 2))));
            }
            let mut stricts = Vec::new();
            for _ in 0..(1 + rng.next_u64() % 3) {
                let a: Vec<Rat> = (0..n).map(|_| r(rng.range_i64(-3, 3))).collect();
                stricts.push((a, r(rng.range_i64(-2, 2))));
            }
            let mut full = sys.clone();
            for (a, b) in &stricts {
                full.push(Constraint::gt(a.clone(), b.clone()));
            }
            let mut weakened = sys.clone();
            for (a, b) in &stricts {
                weakened.push(Constraint::ge(a.clone(), b.clone()));
            }
            let full_feasible = solve_feasibility(&full).unwrap().is_feasible();
            let mut decomposed = solve_feasibility(&weakened).unwrap().is_feasible();
            if decomposed {
                for (a, b) in &stricts {
                    let mut one = weakened.clone();
                    one.push(Constraint::gt(a.clone(), b.clone()));
                    if !solve_feasibility(&one).unwrap().is_feasible() {
                        decomposed = false;
                        break;
                    }
                }
            }
            assert_eq!(full_feasible, decomposed, "averaging decomposition fails on {full:?}");
        }
    }

    #[test]
    fn projection_of_box() {
        // Project {0 <= x <= 1, 0 <= y <= 2} onto y.
        let cs = vec![
            Constraint::ge(rv(&[1, 0]), r(0)),
            Constraint::ge(rv(&[-1, 0]), r(-1)),
            Constraint::ge(rv(&[0, 1]), r(0)),
            Constraint::ge(rv(&[0, -1]), r(-2)),
        ];
        let proj = fm_project(2, &cs, &[1]).unwrap();
        // Expect exactly y >= 0 and -y >= -2 (after normalization).
        let mut sys = LinearSystem::new(1);
        for c in proj {
            sys.push(c);
        }
        assert_eq!(
            solve_feasibility(&sys).unwrap(),
            Feasibility::Witness(rv(&[1]))
        );
    }
}

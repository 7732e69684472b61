//! Dual quadratic representation of the pre-kernel.
//!
//! On each payoff equivalence class (payoffs sharing the same most effective
//! coalitions) the objective `h` is the quadratic `h_γ(x) = ‖α + Eᵀx‖²`, so
//! a pre-kernel point is found by repeatedly solving a least-squares problem
//! and re-reading the class at the new point.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{excesses, h_eval, is_prekernel, pair_coalitions, HMode, Payoff, TuGame};
use crate::linalg::{dot, norm_squared, nullspace, pseudo_inverse, RationalMatrix};
use crate::prenucleolus::{kohlberg_verify, prenucleolus};
use crate::rational::{frac, int, Rational};

/// `S_ij(x)` for every ordered pair `i ≠ j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MecProfile {
    n: usize,
    sets: Vec<Coalition>,
}

impl MecProfile {
    pub fn players(&self) -> usize {
        self.n
    }

    /// Panics on `i == j`.
    pub fn get(&self, i: usize, j: usize) -> Coalition {
        assert!(i != j && i < self.n && j < self.n, "invalid pair ({i},{j})");
        self.sets[i * self.n + j]
    }

    /// `(i, j, S_ij)` over ordered pairs, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Coalition)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n)
                .filter(move |&j| j != i)
                .map(move |j| (i, j, self.sets[i * n + j]))
        })
    }

    /// Distinct coalitions of the profile in increasing bitmask order.
    pub fn union(&self) -> Vec<Coalition> {
        let mut all: Vec<Coalition> = self.entries().map(|(_, _, s)| s).collect();
        all.sort();
        all.dedup();
        all
    }
}

impl fmt::Debug for MecProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (i, j, s) in self.entries() {
            map.entry(&format_args!("S{}{}", i + 1, j + 1), &s);
        }
        map.finish()
    }
}

/// Lexicographically smallest most effective coalitions at `x`: among the
/// maximisers of `e(S,x)` over `G_ij`, the smallest by cardinality and then
/// by sorted member list.
pub fn lex_smallest(game: &TuGame, x: &Payoff) -> MecProfile {
    let n = game.players();
    let e = excesses(game, x);
    let mut sets = vec![Coalition::EMPTY; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut best: Option<Coalition> = None;
            for s in pair_coalitions(n, i, j) {
                best = match best {
                    None => Some(s),
                    Some(b) => {
                        let (es, eb) = (&e[s.index()], &e[b.index()]);
                        if es > eb || (es == eb && s.tie_break_cmp(b).is_lt()) {
                            Some(s)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            sets[i * n + j] = best.expect("G_ij is never empty");
        }
    }
    MecProfile { n, sets }
}

/// Unordered pairs `(i, j)`, `i < j`, in the column order of `E`.
pub fn pair_columns(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSystem {
    /// `n × q`; pair columns first, efficiency column last.
    pub e: RationalMatrix,
    pub alpha: Vec<Rational>,
    /// `Q = 2EEᵀ`.
    pub q: RationalMatrix,
    /// `a = 2Eα`.
    pub a: Vec<Rational>,
    /// `‖α‖²`.
    pub alpha_scalar: Rational,
}

impl QuadraticSystem {
    pub fn players(&self) -> usize {
        self.e.rows()
    }

    pub fn width(&self) -> usize {
        self.e.cols()
    }

    pub fn et(&self) -> RationalMatrix {
        self.e.transpose()
    }

    pub fn rank(&self) -> usize {
        self.e.rank()
    }
}

pub fn build_system(game: &TuGame, profile: &MecProfile) -> QuadraticSystem {
    let n = game.players();
    assert_eq!(profile.players(), n, "profile and game disagree on n");
    let pairs = pair_columns(n);
    let q = pairs.len() + 1;
    let mut e = RationalMatrix::zeros(n, q);
    let mut alpha = Vec::with_capacity(q);
    for (c, &(i, j)) in pairs.iter().enumerate() {
        let (sij, sji) = (profile.get(i, j), profile.get(j, i));
        for k in 0..n {
            e[(k, c)] = int(sji.contains(k) as i64 - sij.contains(k) as i64);
        }
        alpha.push(game.value(sij) - game.value(sji));
    }
    for k in 0..n {
        e[(k, q - 1)] = int(-1);
    }
    alpha.push(game.value(game.grand()).clone());

    let two = int(2);
    let qm = e.mul(&e.transpose()).scale(&two);
    let a: Vec<Rational> = e.mul_vec(&alpha).into_iter().map(|v| v * &two).collect();
    let alpha_scalar = norm_squared(&alpha);
    QuadraticSystem {
        e,
        alpha,
        q: qm,
        a,
        alpha_scalar,
    }
}

/// `ξ = α + Eᵀγ`; zero exactly when `γ` balances every pair of the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiVector(pub Vec<Rational>);

impl XiVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

pub fn xi_vector(sys: &QuadraticSystem, gamma: &[Rational]) -> XiVector {
    let shift = sys.et().mul_vec(gamma);
    XiVector(sys.alpha.iter().zip(shift).map(|(a, s)| a + s).collect())
}

/// `‖α + Eᵀx‖²`.
pub fn h_gamma_eval(sys: &QuadraticSystem, x: &[Rational]) -> Rational {
    norm_squared(&xi_vector(sys, x).0)
}

/// `½xᵀQx + aᵀx + ‖α‖²`, algebraically equal to [`h_gamma_eval`].
pub fn h_gamma_quadratic(sys: &QuadraticSystem, x: &[Rational]) -> Rational {
    let qx = sys.q.mul_vec(x);
    dot(x, &qx) * frac(1, 2) + dot(&sys.a, x) + &sys.alpha_scalar
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimizer {
    /// Minimum-norm solution of `Qx = −a`.
    pub xstar: Vec<Rational>,
    /// Basis of `ker Q`; the minimisers are `xstar + span(solution_space)`.
    pub solution_space: Vec<Vec<Rational>>,
}

pub fn minimize_quadratic(sys: &QuadraticSystem) -> Minimizer {
    let neg_a: Vec<Rational> = sys.a.iter().map(|v| -v.clone()).collect();
    Minimizer {
        xstar: pseudo_inverse(&sys.q).mul_vec(&neg_a),
        solution_space: nullspace(&sys.q),
    }
}

/// Orthogonal projection `P = 2EᵀQ†E` onto the column space of `Eᵀ`.
pub fn projection_p(sys: &QuadraticSystem) -> RationalMatrix {
    sys.et()
        .mul(&pseudo_inverse(&sys.q))
        .mul(&sys.e)
        .scale(&int(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchRoute {
    Projection,
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub point: Payoff,
    pub iterations: usize,
    pub restarts: usize,
    pub route: SearchRoute,
}

const MAX_ITERATIONS: usize = 200;
const MAX_RESTARTS: usize = 3;

/// Projection search from the equal split, with the sequential LP
/// pre-nucleolus as a fallback when the iteration cycles.
pub fn prekernel_search(game: &TuGame) -> Result<SearchResult> {
    let mut x = Payoff::equal_split(game);
    let mut prev: Option<Payoff> = None;
    let mut seen: HashSet<MecProfile> = HashSet::new();
    let mut restarts = 0;
    for iterations in 0..MAX_ITERATIONS {
        if h_eval(game, &x, HMode::ViaSurplus).is_zero() {
            return Ok(SearchResult {
                point: x,
                iterations,
                restarts,
                route: SearchRoute::Projection,
            });
        }
        let profile = lex_smallest(game, &x);
        if !seen.insert(profile.clone()) {
            restarts += 1;
            if restarts > MAX_RESTARTS {
                break;
            }
            if let Some(p) = prev.take() {
                let half = frac(1, 2);
                x = Payoff::new(
                    p.as_slice()
                        .iter()
                        .zip(x.as_slice())
                        .map(|(a, b)| (a + b) * &half)
                        .collect(),
                );
            }
            seen.clear();
            continue;
        }
        let next = Payoff::new(minimize_quadratic(&build_system(game, &profile)).xstar);
        prev = Some(std::mem::replace(&mut x, next));
    }
    let point = prenucleolus(game);
    if !is_prekernel(game, &point) {
        return Err(Error::NoConvergence(
            "projection search and LP fallback both failed".into(),
        ));
    }
    Ok(SearchResult {
        point,
        iterations: MAX_ITERATIONS,
        restarts,
        route: SearchRoute::Fallback,
    })
}

/// A pre-kernel point of `game`, exact.
pub fn prekernel_point(game: &TuGame) -> Result<Payoff> {
    prekernel_search(game).map(|r| r.point)
}

/// Largest step along `1_j − 1_i` over which the profile stays the same.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairStep {
    pub i: usize,
    pub j: usize,
    /// `None` when the profile survives every step length.
    pub step: Option<Rational>,
}

/// Exact breakpoint of every pair direction. Excesses are affine in the
/// step, so each competitor `T` of `S_kl` overtakes it at a single point.
pub fn class_steps(game: &TuGame, x: &Payoff, profile: &MecProfile) -> Vec<PairStep> {
    let n = game.players();
    let e = excesses(game, x);
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // Along x + t(1_j − 1_i) the excess of T moves at rate [i∈T] − [j∈T].
            let slope = |t: Coalition| t.contains(i) as i64 - t.contains(j) as i64;
            let mut best: Option<Rational> = None;
            'pairs: for (k, l, star) in profile.entries() {
                let s_star = slope(star);
                for t in pair_coalitions(n, k, l) {
                    if t == star {
                        continue;
                    }
                    let rise = slope(t) - s_star;
                    if rise <= 0 {
                        continue;
                    }
                    let gap = &e[star.index()] - &e[t.index()];
                    let step = gap / int(rise);
                    if best.as_ref().is_none_or(|b| step < *b) {
                        let zero = step.is_zero();
                        best = Some(step);
                        if zero {
                            break 'pairs;
                        }
                    }
                }
            }
            out.push(PairStep { i, j, step: best });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessCertificate {
    pub profile: MecProfile,
    pub rank: usize,
    pub steps: Vec<PairStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inconclusive {
    RankDeficient { rank: usize },
    Boundary { i: usize, j: usize },
    NotBalanced,
}

impl fmt::Display for Inconclusive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inconclusive::RankDeficient { rank } => write!(f, "rank of E is {rank}"),
            Inconclusive::Boundary { i, j } => {
                write!(f, "class boundary in direction 1_{} - 1_{}", j + 1, i + 1)
            }
            Inconclusive::NotBalanced => f.write_str("Kohlberg criterion fails"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified(UniquenessCertificate),
    Inconclusive(Inconclusive),
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

/// Sufficient test for a singleton pre-kernel at `x`: full rank `Eᵀ`, `x`
/// interior to its class, and `x` the pre-nucleolus. Never claims
/// non-uniqueness.
pub fn certify_unique(game: &TuGame, x: &Payoff) -> Result<Certification> {
    if !is_prekernel(game, x) {
        return Err(Error::NotPrekernel(x.to_string()));
    }
    let n = game.players();
    let profile = lex_smallest(game, x);
    let rank = build_system(game, &profile).rank();
    if rank < n {
        return Ok(Certification::Inconclusive(Inconclusive::RankDeficient { rank }));
    }
    let steps = class_steps(game, x, &profile);
    if let Some(s) = steps
        .iter()
        .find(|s| s.step.as_ref().is_some_and(|d| !d.is_positive()))
    {
        return Ok(Certification::Inconclusive(Inconclusive::Boundary { i: s.i, j: s.j }));
    }
    if !kohlberg_verify(game, x)? {
        return Ok(Certification::Inconclusive(Inconclusive::NotBalanced));
    }
    Ok(Certification::Certified(UniquenessCertificate {
        profile,
        rank,
        steps,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{average_convex_default, default_point, symmetric_three_player, two_player};
    use crate::linalg::satisfies_penrose;

    fn coalitions(sets: &[&[usize]]) -> Vec<Coalition> {
        let mut v: Vec<Coalition> = sets
            .iter()
            .map(|s| Coalition::from_players(&s.iter().map(|p| p - 1).collect::<Vec<_>>()))
            .collect();
        v.sort();
        v
    }

    fn default_system() -> QuadraticSystem {
        let game = average_convex_default();
        build_system(&game, &lex_smallest(&game, &default_point()))
    }

    #[test]
    fn default_profile_union() {
        let game = average_convex_default();
        let profile = lex_smallest(&game, &default_point());
        assert_eq!(
            profile.union(),
            coalitions(&[&[2], &[3], &[4], &[1, 2], &[1, 3, 4]])
        );
    }

    #[test]
    fn two_player_profile_and_system() {
        let game = two_player();
        let x = Payoff::new(vec![int(1), int(1)]);
        let profile = lex_smallest(&game, &x);
        assert_eq!(profile.get(0, 1), Coalition::singleton(0));
        assert_eq!(profile.get(1, 0), Coalition::singleton(1));
        let sys = build_system(&game, &profile);
        assert_eq!(sys.e, RationalMatrix::from_i64_rows(&[&[-1, -1], &[1, -1]]));
        assert_eq!(sys.alpha, vec![int(0), int(2)]);
        assert_eq!(h_gamma_eval(&sys, &[int(2), int(0)]), int(4));
        assert_eq!(h_gamma_quadratic(&sys, &[int(2), int(0)]), int(4));
        assert_eq!(minimize_quadratic(&sys).xstar, vec![int(1), int(1)]);
    }

    #[test]
    fn default_system_solves_to_prekernel() {
        let sys = default_system();
        assert_eq!((sys.e.rows(), sys.e.cols()), (4, 7));
        assert_eq!(sys.rank(), 4);
        let x = default_point();
        assert!(h_gamma_eval(&sys, x.as_slice()).is_zero());
        assert!(xi_vector(&sys, x.as_slice()).is_zero());
        let m = minimize_quadratic(&sys);
        assert_eq!(m.xstar, x.into_vec());
        assert!(m.solution_space.is_empty());
    }

    #[test]
    fn projection_identities() {
        let sys = default_system();
        let p = projection_p(&sys);
        let et = sys.et();
        assert_eq!(p.mul(&p), p);
        assert!(p.is_symmetric());
        assert_eq!(p.mul(&et), et);
        assert_ne!(p, RationalMatrix::identity(sys.width()));
        assert_eq!(p.mul_vec(&sys.alpha), sys.alpha);
        let qpinv = pseudo_inverse(&sys.q);
        assert!(satisfies_penrose(&sys.q, &qpinv));
        assert_eq!(pseudo_inverse(&et), qpinv.mul(&sys.e).scale(&int(2)));
    }

    #[test]
    fn q_entries_are_bounded_integers() {
        let sys = default_system();
        let bound = int(12);
        assert!(sys.q.entries().iter().all(|v| v.is_integer() && v.abs() <= bound));
        assert!(sys.q.is_symmetric());
    }

    #[test]
    fn rank_deficient_class_still_solves_normal_equations() {
        // Three players always give rank 3, so this class lives in n = 4.
        let worths = [-2, -2, -2, 0, 6, 6, 2, -1, 3, 4, 1, 6, 0, 1, 4];
        let game = TuGame::new(4, worths.iter().map(|&w| int(w)).collect()).unwrap();
        let x = Payoff::new(vec![int(-3), int(0), int(3), int(0)]);
        let sys = build_system(&game, &lex_smallest(&game, &x));
        assert_eq!(sys.rank(), 3);
        let m = minimize_quadratic(&sys);
        let neg_a: Vec<Rational> = sys.a.iter().map(|v| -v.clone()).collect();
        assert_eq!(sys.q.mul_vec(&m.xstar), neg_a);
        assert_eq!(m.solution_space.len(), 1);
        assert!(satisfies_penrose(&sys.q, &pseudo_inverse(&sys.q)));
    }

    #[test]
    fn search_reaches_default_point() {
        let result = prekernel_search(&average_convex_default()).unwrap();
        assert_eq!(result.point, default_point());
        assert_eq!(result.route, SearchRoute::Projection);
        let two = prekernel_point(&two_player()).unwrap();
        assert_eq!(two, Payoff::new(vec![int(1), int(1)]));
    }

    #[test]
    fn default_point_is_certified() {
        let cert = certify_unique(&average_convex_default(), &default_point()).unwrap();
        assert!(cert.is_certified());
    }

    #[test]
    fn symmetric_ties_are_inconclusive() {
        let game = symmetric_three_player();
        let x = Payoff::new(vec![int(1), int(1), int(1)]);
        assert!(is_prekernel(&game, &x));
        let cert = certify_unique(&game, &x).unwrap();
        assert!(matches!(cert, Certification::Inconclusive(Inconclusive::Boundary { .. })));
    }

    #[test]
    fn certify_rejects_non_members() {
        let x = Payoff::new(vec![int(4); 4]);
        assert!(matches!(
            certify_unique(&average_convex_default(), &x),
            Err(Error::NotPrekernel(_))
        ));
    }
}

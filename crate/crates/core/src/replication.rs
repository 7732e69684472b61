//! Families of related games sharing a pre-kernel point.
//!
//! With `V` the matrix of Dirac-game differences selected by the most
//! effective coalitions and `U` the unanimity basis, every `Δ` in the null
//! space of `W = VᵀU` gives a direction `UΔ` in game space that leaves
//! `α = Vᵀv` untouched. Small enough steps keep the pre-kernel point.

use num_traits::{One, Signed, Zero};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::unanimity::zeta;
use crate::game::{is_prekernel, Payoff, TuGame};
use crate::linalg::{clear_denominators, norm_squared, nullspace, RationalMatrix};
use crate::prekernel::{
    build_system, certify_unique, class_steps, lex_smallest, pair_columns, MecProfile,
    QuadraticSystem,
};
use crate::rational::{frac, int, sqrt_floor, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionPowerSystem {
    /// `(2^n − 1) × q`: columns `1^{S_ij} − 1^{S_ji}` per pair, then `1^N`.
    pub v: RationalMatrix,
    /// `U[S][T] = 1` iff `T ⊆ S`.
    pub u: RationalMatrix,
    /// `W = VᵀU`.
    pub w: RationalMatrix,
    /// Whether every column of `Eᵀ` lies in the range of `Vᵀ`.
    pub e_range_in_v: bool,
}

pub fn unanimity_matrix(n: usize) -> RationalMatrix {
    let p = (1usize << n) - 1;
    RationalMatrix::from_fn(p, p, |r, c| {
        let (s, t) = (Coalition::from_index(r), Coalition::from_index(c));
        int(t.is_subset_of(s) as i64)
    })
}

pub fn build_power_system(game: &TuGame, profile: &MecProfile) -> CoalitionPowerSystem {
    let n = game.players();
    let pairs = pair_columns(n);
    let p = game.axis_len();
    let q = pairs.len() + 1;
    let mut v = RationalMatrix::zeros(p, q);
    for (c, &(i, j)) in pairs.iter().enumerate() {
        v[(profile.get(i, j).index(), c)] += int(1);
        v[(profile.get(j, i).index(), c)] -= int(1);
    }
    v[(game.grand().index(), q - 1)] = int(1);
    let u = unanimity_matrix(n);
    let vt = v.transpose();
    let w = vt.mul(&u);
    let et = build_system(game, profile).et();
    let e_range_in_v = vt.hstack(&et).rank() == vt.rank();
    CoalitionPowerSystem {
        v,
        u,
        w,
        e_range_in_v,
    }
}

/// Integer basis of `ker W`.
pub fn family_nullspace(sys: &CoalitionPowerSystem) -> Vec<Vec<Rational>> {
    nullspace(&sys.w)
        .iter()
        .map(|z| clear_denominators(z))
        .collect()
}

/// `v + μ·UΔ`. Rejects `Δ ∉ ker W`.
pub fn related_game(
    game: &TuGame,
    sys: &CoalitionPowerSystem,
    delta: &[Rational],
    mu: &Rational,
) -> Result<TuGame> {
    if delta.len() != game.axis_len() {
        return Err(Error::Dimension {
            expected: game.axis_len(),
            found: delta.len(),
        });
    }
    if !sys.w.mul_vec(delta).iter().all(Zero::is_zero) {
        return Err(Error::NotInNullSpace);
    }
    let shift = zeta(game.players(), delta);
    TuGame::new(
        game.players(),
        game.values()
            .iter()
            .zip(shift)
            .map(|(v, s)| v + mu * s)
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalBound {
    /// Level `c̄` of `h_γ` below which the class is kept, halved for margin.
    /// `None` when no pair direction ever leaves the class.
    pub c_bar: Option<Rational>,
    /// `C²`, exact.
    pub c_squared: Option<Rational>,
    /// `C` rounded down to a multiple of `2^-32`.
    pub c: Option<Rational>,
}

/// Variation radius `C = min_{i≠j} √c̄ / ‖Eᵀ(1_j − 1_i)‖`, with `c̄` probed
/// exactly along each pair direction. Errors with [`Error::BoundaryPoint`]
/// when `x` sits on the boundary of its class.
pub fn critical_bound(game: &TuGame, x: &Payoff, sys: &QuadraticSystem) -> Result<CriticalBound> {
    if !is_prekernel(game, x) {
        return Err(Error::NotPrekernel(x.to_string()));
    }
    let n = game.players();
    let rank = sys.rank();
    if rank < n {
        return Err(Error::RankDeficient { rank, n });
    }
    let et = sys.et();
    let dir_norm = |i: usize, j: usize| {
        let mut d = vec![Rational::zero(); n];
        d[j] = int(1);
        d[i] = int(-1);
        norm_squared(&et.mul_vec(&d))
    };
    let steps = class_steps(game, x, &lex_smallest(game, x));
    let mut c_bar: Option<Rational> = None;
    for s in &steps {
        let Some(delta) = &s.step else { continue };
        if !delta.is_positive() {
            return Err(Error::BoundaryPoint);
        }
        // h_γ(x + δd) = δ²‖Eᵀd‖² because ξ vanishes at x.
        let level = delta * delta * dir_norm(s.i, s.j) * frac(1, 2);
        if c_bar.as_ref().is_none_or(|c| level < *c) {
            c_bar = Some(level);
        }
    }
    let c_squared = c_bar.as_ref().map(|cb| {
        steps
            .iter()
            .map(|s| cb / dir_norm(s.i, s.j))
            .min()
            .expect("at least one pair")
    });
    let c = c_squared.as_ref().map(|c2| sqrt_floor(c2, 32));
    Ok(CriticalBound {
        c_bar,
        c_squared,
        c,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatedFamily {
    pub base: TuGame,
    pub point: Payoff,
    pub profile: MecProfile,
    pub deltas: Vec<Vec<Rational>>,
    /// Requested scale.
    pub mu: Rational,
    /// Scale actually used per game after shrinking.
    pub mus: Vec<Rational>,
    pub bound: Option<CriticalBound>,
    pub games: Vec<TuGame>,
}

impl RelatedFamily {
    /// The base game followed by the generated games.
    pub fn members(&self) -> Vec<TuGame> {
        std::iter::once(self.base.clone())
            .chain(self.games.iter().cloned())
            .collect()
    }

    /// Whether the generated games are linearly independent as vectors.
    pub fn is_independent(&self) -> bool {
        games_rank(&self.games) == self.games.len()
    }
}

pub fn games_rank(games: &[TuGame]) -> usize {
    if games.is_empty() {
        return 0;
    }
    RationalMatrix::from_rows(games.iter().map(|g| g.values().to_vec()).collect()).rank()
}

const MAX_HALVINGS: usize = 64;

/// One related game per null-space direction. Each candidate must keep `x`
/// in its pre-kernel with the same most effective coalitions, and, when `x`
/// is certified unique for the base game, stay certified; otherwise `μ` is
/// halved for that game.
pub fn replicate_family(game: &TuGame, x: &Payoff, mu: &Rational) -> Result<RelatedFamily> {
    if !is_prekernel(game, x) {
        return Err(Error::NotPrekernel(x.to_string()));
    }
    let profile = lex_smallest(game, x);
    let power = build_power_system(game, &profile);
    let deltas = family_nullspace(&power);
    let certified = certify_unique(game, x)?.is_certified();
    let bound = critical_bound(game, x, &build_system(game, &profile)).ok();

    let accepts = |g: &TuGame| -> Result<bool> {
        Ok(is_prekernel(g, x)
            && lex_smallest(g, x) == profile
            && (!certified || certify_unique(g, x)?.is_certified()))
    };

    let mut games = Vec::with_capacity(deltas.len());
    let mut mus = Vec::with_capacity(deltas.len());
    for (index, delta) in deltas.iter().enumerate() {
        let mut m = mu.clone();
        let mut found = None;
        for _ in 0..=MAX_HALVINGS {
            let candidate = related_game(game, &power, delta, &m)?;
            if accepts(&candidate)? {
                found = Some(candidate);
                break;
            }
            m /= int(2);
        }
        let Some(g) = found else {
            return Err(Error::ReplicationFailed {
                index,
                attempts: MAX_HALVINGS + 1,
            });
        };
        games.push(g);
        mus.push(m);
    }
    Ok(RelatedFamily {
        base: game.clone(),
        point: x.clone(),
        profile,
        deltas,
        mu: mu.clone(),
        mus,
        bound,
        games,
    })
}

/// Coalition-wise `Σ t_k v_k` with `t ≥ 0`, `Σ t = 1`.
pub fn convex_combine(games: &[TuGame], weights: &[Rational]) -> Result<TuGame> {
    if games.is_empty() || games.len() != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} games",
            weights.len(),
            games.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(Error::InvalidWeights(format!("negative weight {w}")));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let n = games[0].players();
    if let Some(g) = games.iter().find(|g| g.players() != n) {
        return Err(Error::Dimension {
            expected: n,
            found: g.players(),
        });
    }
    TuGame::from_fn(n, |s| {
        games
            .iter()
            .zip(weights)
            .filter(|(_, w)| !w.is_zero())
            .map(|(g, w)| w * g.value(s))
            .sum()
    })
}

/// Games along the segment that moves weight `ε` from member `b` to member
/// `a` of `family.members()`, starting from `weights`.
pub fn segment_sample(
    family: &RelatedFamily,
    weights: &[Rational],
    index_a: usize,
    index_b: usize,
    eps_grid: &[Rational],
) -> Result<Vec<TuGame>> {
    let members = family.members();
    if index_a >= members.len() || index_b >= members.len() || index_a == index_b {
        return Err(Error::InvalidWeights(format!(
            "segment indices {index_a},{index_b} out of 0..{}",
            members.len()
        )));
    }
    eps_grid
        .iter()
        .map(|eps| {
            let mut t = weights.to_vec();
            if t.len() != members.len() {
                return Err(Error::InvalidWeights(format!(
                    "{} weights for {} games",
                    t.len(),
                    members.len()
                )));
            }
            t[index_a] += eps;
            t[index_b] -= eps;
            convex_combine(&members, &t)
        })
        .collect()
}

/// `k` evenly spaced points from `lo` to `hi` inclusive.
pub fn eps_grid(lo: &Rational, hi: &Rational, k: usize) -> Vec<Rational> {
    match k {
        0 => Vec::new(),
        1 => vec![lo.clone()],
        _ => {
            let step = (hi - lo) / int(k as i64 - 1);
            (0..k).map(|s| lo + &step * int(s as i64)).collect()
        }
    }
}

/// Uniform weights `1/k`.
pub fn uniform_weights(k: usize) -> Vec<Rational> {
    vec![frac(1, k as i64); k]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{average_convex_default, default_point, symmetric_three_player};
    use crate::linalg::pseudo_inverse;

    fn default_power() -> (TuGame, MecProfile, CoalitionPowerSystem) {
        let game = average_convex_default();
        let profile = lex_smallest(&game, &default_point());
        let sys = build_power_system(&game, &profile);
        (game, profile, sys)
    }

    #[test]
    fn power_system_dimensions_and_rank() {
        let (game, profile, sys) = default_power();
        assert_eq!((sys.v.rows(), sys.v.cols()), (15, 7));
        assert_eq!((sys.w.rows(), sys.w.cols()), (7, 15));
        assert_eq!(sys.w.rank(), 4);
        assert_eq!(family_nullspace(&sys).len(), 11);
        assert!(sys.e_range_in_v);
        let alpha = build_system(&game, &profile).alpha;
        assert_eq!(sys.v.transpose().mul_vec(game.values()), alpha);
    }

    #[test]
    fn nullspace_directions_preserve_alpha() {
        let (game, profile, sys) = default_power();
        let alpha = build_system(&game, &profile).alpha;
        let vt = sys.v.transpose();
        for delta in family_nullspace(&sys) {
            assert!(delta.iter().all(|d| d.is_integer()));
            let shift = sys.u.mul_vec(&delta);
            assert!(vt.mul_vec(&shift).iter().all(Zero::is_zero));
            let g = related_game(&game, &sys, &delta, &frac(9, 10)).unwrap();
            assert_eq!(vt.mul_vec(g.values()), alpha);
            assert_eq!(related_game(&game, &sys, &delta, &int(0)).unwrap(), game);
        }
    }

    #[test]
    fn related_game_rejects_foreign_direction() {
        let (game, _, sys) = default_power();
        let mut delta = vec![int(0); 15];
        delta[0] = int(1);
        assert_eq!(
            related_game(&game, &sys, &delta, &int(1)),
            Err(Error::NotInNullSpace)
        );
    }

    #[test]
    fn range_projection_identities() {
        let (game, profile, sys) = default_power();
        let qs = build_system(&game, &profile);
        let vt = sys.v.transpose();
        let pv = vt.mul(&pseudo_inverse(&vt));
        let et = qs.et();
        assert_eq!(pv.mul_vec(&qs.alpha), qs.alpha);
        assert_eq!(pv.mul(&et), et);
        assert_eq!(qs.e.mul(&pv), qs.e);
    }

    #[test]
    fn default_bound_is_positive() {
        let game = average_convex_default();
        let x = default_point();
        let qs = build_system(&game, &lex_smallest(&game, &x));
        let bound = critical_bound(&game, &x, &qs).unwrap();
        assert!(bound.c_squared.unwrap().is_positive());
        assert!(bound.c.unwrap().is_positive());
    }

    #[test]
    fn boundary_point_is_signalled() {
        let game = symmetric_three_player();
        let x = Payoff::new(vec![int(1); 3]);
        let qs = build_system(&game, &lex_smallest(&game, &x));
        assert_eq!(critical_bound(&game, &x, &qs), Err(Error::BoundaryPoint));
    }

    #[test]
    fn zero_scale_family_is_degenerate() {
        let game = average_convex_default();
        let family = replicate_family(&game, &default_point(), &int(0)).unwrap();
        assert_eq!(family.games.len(), 11);
        assert!(family.games.iter().all(|g| *g == game));
        assert!(!family.is_independent());
    }

    #[test]
    fn convex_combination_rules() {
        let game = average_convex_default();
        let other = symmetric_three_player();
        assert_eq!(
            convex_combine(&[game.clone()], &[int(1)]).unwrap(),
            game
        );
        assert!(convex_combine(&[game.clone(), game.clone()], &[frac(1, 2), frac(1, 3)]).is_err());
        assert!(convex_combine(&[game.clone(), game.clone()], &[int(2), int(-1)]).is_err());
        assert!(convex_combine(&[game, other], &[frac(1, 2), frac(1, 2)]).is_err());
    }

    #[test]
    fn grid_is_inclusive() {
        let g = eps_grid(&int(-2), &int(2), 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], int(-2));
        assert_eq!(g[5], int(0));
        assert_eq!(g[10], int(2));
    }
}

//! Pre-nucleolus by sequential exact LPs, and its verification through
//! Kohlberg's balancedness criterion.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::coalition::{self, Coalition};
use crate::error::{Error, Result};
use crate::game::{excess, excesses, Payoff, TuGame};
use crate::linalg::{solve_linear, RationalMatrix};
use crate::lp::{LinearProgram, LpStatus, Sense};
use crate::rational::{int, Rational};

/// `θ(x)`: all `2^n` excesses (the empty coalition included) in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessProfile(Vec<Rational>);

impl ExcessProfile {
    pub fn new(game: &TuGame, x: &Payoff) -> Self {
        let mut e = excesses(game, x);
        e.push(Rational::zero());
        e.sort_by(|a, b| b.cmp(a));
        ExcessProfile(e)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

impl PartialOrd for ExcessProfile {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The lexicographic order `≤_L`.
impl Ord for ExcessProfile {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedCertificate {
    pub collection: Vec<Coalition>,
    /// Strictly positive, aligned with `collection`.
    pub weights: Vec<Rational>,
}

impl BalancedCertificate {
    /// `Σ w_S 1_S = 1_N` with every weight positive.
    pub fn recombines(&self, n: usize) -> bool {
        self.weights.iter().all(Signed::is_positive)
            && (0..n).all(|k| {
                let cover: Rational = self
                    .collection
                    .iter()
                    .zip(&self.weights)
                    .filter(|(s, _)| s.contains(k))
                    .map(|(_, w)| w.clone())
                    .sum();
                cover.is_one()
            })
    }
}

/// `D(ψ,x)`: non-empty coalitions, `N` included, whose excess is at least `psi`.
pub fn dset(game: &TuGame, psi: &Rational, x: &Payoff) -> Vec<Coalition> {
    let e = excesses(game, x);
    game.coalitions().filter(|s| e[s.index()] >= *psi).collect()
}

/// Balancedness over `N = {0..n}`. Solves `max ε` subject to
/// `Σ w_S 1_S = 1_N`, `w_S ≥ ε`; the collection is balanced iff `ε* > 0`,
/// and the optimal weights are the certificate.
pub fn is_balanced(collection: &[Coalition], n: usize) -> Option<BalancedCertificate> {
    let mut members: Vec<Coalition> = collection.to_vec();
    members.sort();
    members.dedup();
    let grand = Coalition::grand(n);
    if members.is_empty() || members.iter().any(|s| s.is_empty() || !s.is_subset_of(grand)) {
        return None;
    }
    let m = members.len();
    let eps = m;
    let mut lp = LinearProgram::new(m + 1, Sense::Maximize);
    let mut objective = vec![Rational::zero(); m + 1];
    objective[eps] = Rational::one();
    lp.set_objective(objective);
    for k in 0..n {
        let mut row: Vec<Rational> = members.iter().map(|s| int(s.contains(k) as i64)).collect();
        row.push(Rational::zero());
        lp.add_eq(row, Rational::one());
    }
    for c in 0..m {
        let mut row = vec![Rational::zero(); m + 1];
        row[c] = Rational::one();
        row[eps] = int(-1);
        lp.add_ge(row, Rational::zero());
    }
    let out = lp.solve();
    if out.status != LpStatus::Optimal || !out.value?.is_positive() {
        return None;
    }
    let mut weights = out.point?;
    weights.truncate(m);
    Some(BalancedCertificate {
        collection: members,
        weights,
    })
}

/// Kohlberg's criterion: every non-empty `D(ψ,x)` is balanced. Only the
/// distinct excess levels need checking.
pub fn kohlberg_verify(game: &TuGame, x: &Payoff) -> Result<bool> {
    if !x.is_efficient(game) {
        return Err(Error::NotEfficient {
            total: x.total().to_string(),
            worth: game.value(game.grand()).to_string(),
        });
    }
    let mut levels = excesses(game, x);
    levels.sort();
    levels.dedup();
    let n = game.players();
    Ok(levels
        .iter()
        .rev()
        .all(|psi| is_balanced(&dset(game, psi, x), n).is_some()))
}

fn indicator_row(s: Coalition, n: usize) -> Vec<Rational> {
    (0..n).map(|k| int(s.contains(k) as i64)).collect()
}

struct Stage<'a> {
    game: &'a TuGame,
    free: &'a [Coalition],
    frozen: &'a [(Coalition, Rational)],
}

impl Stage<'_> {
    /// Variables `x_0..x_{n−1}, t`, all free.
    fn program(&self) -> LinearProgram {
        let n = self.game.players();
        let mut lp = LinearProgram::new(n + 1, Sense::Minimize);
        for k in 0..=n {
            lp.set_free(k);
        }
        let mut objective = vec![Rational::zero(); n + 1];
        objective[n] = Rational::one();
        lp.set_objective(objective);
        for &s in self.free {
            let mut row = indicator_row(s, n);
            row.push(Rational::one());
            lp.add_ge(row, self.game.value(s).clone());
        }
        for (s, level) in self.frozen {
            let mut row = indicator_row(*s, n);
            row.push(Rational::zero());
            lp.add_eq(row, self.game.value(*s) - level);
        }
        let mut row = vec![Rational::one(); n];
        row.push(Rational::zero());
        lp.add_eq(row, self.game.value(self.game.grand()).clone());
        lp
    }
}

/// The pre-nucleolus, exact. Each round minimises the largest free excess,
/// then freezes the coalitions that attain it in every optimal solution.
pub fn prenucleolus(game: &TuGame) -> Payoff {
    let n = game.players();
    let grand = game.grand();
    let mut free: Vec<Coalition> = coalition::nonempty(n).filter(|&s| s != grand).collect();
    let mut frozen: Vec<(Coalition, Rational)> = Vec::new();
    let mut basis_rows: Vec<Vec<Rational>> = vec![vec![Rational::one(); n]];

    while RationalMatrix::from_rows(basis_rows.clone()).rank() < n && !free.is_empty() {
        let stage = Stage {
            game,
            free: &free,
            frozen: &frozen,
        };
        let lp = stage.program();
        let out = lp.solve();
        assert_eq!(out.status, LpStatus::Optimal, "stage LP is always solvable");
        let point = out.point.expect("optimal point");
        let t_star = point[n].clone();
        let x = Payoff::new(point[..n].to_vec());

        let mut newly = Vec::new();
        for &s in free.iter().filter(|&&s| excess(game, s, &x) == t_star) {
            // Minimise e(S,x) = v(S) − x(S) with t pinned at t*.
            let mut probe = lp.clone();
            let mut pin = vec![Rational::zero(); n + 1];
            pin[n] = Rational::one();
            probe.add_eq(pin, t_star.clone());
            let mut objective: Vec<Rational> = indicator_row(s, n).into_iter().map(|v| -v).collect();
            objective.push(Rational::zero());
            probe.set_objective(objective);
            let low = probe.solve().value.expect("probe LP is bounded");
            if game.value(s) + low == t_star {
                newly.push(s);
            }
        }
        assert!(!newly.is_empty(), "some coalition is tight on the whole optimal face");
        for s in newly {
            frozen.push((s, t_star.clone()));
            basis_rows.push(indicator_row(s, n));
        }
        let span = RationalMatrix::from_rows(basis_rows.clone());
        let rank = span.rank();
        free.retain(|&s| {
            !frozen.iter().any(|(f, _)| *f == s) && {
                let mut rows = basis_rows.clone();
                rows.push(indicator_row(s, n));
                RationalMatrix::from_rows(rows).rank() > rank
            }
        });
    }

    let mut rhs = vec![game.value(grand).clone()];
    rhs.extend(frozen.iter().map(|(s, level)| game.value(*s) - level));
    let a = RationalMatrix::from_rows(basis_rows);
    Payoff::new(solve_linear(&a, &rhs).expect("frozen equalities are consistent"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{average_convex_default, default_point, symmetric_three_player};
    use crate::rational::frac;

    fn c(players: &[usize]) -> Coalition {
        Coalition::from_players(&players.iter().map(|p| p - 1).collect::<Vec<_>>())
    }

    #[test]
    fn default_game_prenucleolus() {
        let game = average_convex_default();
        assert_eq!(prenucleolus(&game), default_point());
        assert!(kohlberg_verify(&game, &default_point()).unwrap());
    }

    #[test]
    fn symmetric_game_prenucleolus() {
        let x = prenucleolus(&symmetric_three_player());
        assert_eq!(x, Payoff::new(vec![int(1); 3]));
    }

    #[test]
    fn equal_split_fails_kohlberg_on_default_game() {
        let game = average_convex_default();
        assert!(!kohlberg_verify(&game, &Payoff::new(vec![int(4); 4])).unwrap());
        assert!(matches!(
            kohlberg_verify(&game, &Payoff::new(vec![int(1); 4])),
            Err(Error::NotEfficient { .. })
        ));
    }

    #[test]
    fn balanced_examples() {
        let collection = [c(&[2]), c(&[3]), c(&[4]), c(&[1, 2]), c(&[1, 3, 4])];
        let cert = is_balanced(&collection, 4).unwrap();
        assert!(cert.recombines(4));
        assert_eq!(cert.weights, vec![frac(1, 2); 5]);

        let grand = is_balanced(&[Coalition::grand(3)], 3).unwrap();
        assert_eq!(grand.weights, vec![int(1)]);

        assert!(is_balanced(&[c(&[1])], 2).is_none());
        assert!(is_balanced(&[], 2).is_none());
    }

    #[test]
    fn dset_thresholds() {
        let game = average_convex_default();
        let x = default_point();
        assert_eq!(dset(&game, &int(100), &x), vec![]);
        assert_eq!(dset(&game, &int(-1000), &x).len(), 15);
        let top = dset(&game, &int(-4), &x);
        for s in [c(&[2]), c(&[1, 3, 4]), Coalition::grand(4)] {
            assert!(top.contains(&s));
        }
        for s in &top {
            assert!(excess(&game, *s, &x) >= int(-4));
        }
    }

    #[test]
    fn excess_profile_orders_lexicographically() {
        let game = average_convex_default();
        let best = ExcessProfile::new(&game, &default_point());
        let other = ExcessProfile::new(&game, &Payoff::new(vec![int(4); 4]));
        assert_eq!(best.as_slice().len(), 16);
        assert!(best < other);
    }
}

//! Game-class predicates: convexity, average convexity, zero-monotonicity,
//! superadditivity, semiconvexity and core non-emptiness.

use serde::Serialize;

use crate::coalition::{self, Coalition};
use crate::game::TuGame;
use crate::lp::{LinearProgram, LpStatus, Sense};
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GameProperties {
    pub convex: bool,
    pub average_convex: bool,
    pub zero_monotonic: bool,
    pub superadditive: bool,
    pub semiconvex: bool,
    pub core_nonempty: bool,
}

pub fn properties(game: &TuGame) -> GameProperties {
    GameProperties {
        convex: is_convex(game),
        average_convex: is_average_convex(game),
        zero_monotonic: is_zero_monotonic(game),
        superadditive: is_superadditive(game),
        semiconvex: is_semiconvex(game),
        core_nonempty: core_nonempty(game),
    }
}

/// `v(S∪T) + v(S∩T) ≥ v(S) + v(T)` for all `S, T`.
pub fn is_convex(game: &TuGame) -> bool {
    let n = game.players();
    let all: Vec<Coalition> = coalition::nonempty(n).collect();
    all.iter().all(|&s| {
        all.iter().all(|&t| {
            game.worth(s.union(t)) + game.worth(s.intersection(t)) >= game.worth(s) + game.worth(t)
        })
    })
}

fn marginal_sum(game: &TuGame, s: Coalition) -> Rational {
    s.members()
        .map(|i| game.worth(s) - game.worth(s.without(i)))
        .sum()
}

/// `Σ_{i∈S} [v(S) − v(S∖{i})] ≤ Σ_{i∈S} [v(T) − v(T∖{i})]` for all `S ⊆ T`.
pub fn is_average_convex(game: &TuGame) -> bool {
    let sums: Vec<Rational> = std::iter::once(int(0))
        .chain(game.coalitions().map(|s| marginal_sum(game, s)))
        .collect();
    game.coalitions().all(|t| {
        t.subsets()
            .all(|s| sums[s.bits() as usize] <= sums[t.bits() as usize])
    })
}

/// `v(S∪{i}) ≥ v(S) + v({i})` for all `S` and `i ∉ S`.
pub fn is_zero_monotonic(game: &TuGame) -> bool {
    let grand = game.grand();
    (0..game.players()).all(|i| {
        let vi = game.value(Coalition::singleton(i));
        grand
            .without(i)
            .subsets()
            .all(|s| game.value(s.with(i)) >= &(game.worth(s) + vi))
    })
}

/// `v(S∪T) ≥ v(S) + v(T)` for disjoint `S, T`.
pub fn is_superadditive(game: &TuGame) -> bool {
    game.coalitions().all(|u| {
        u.subsets()
            .all(|s| game.value(u) >= &(game.worth(s) + game.worth(u.intersection(Coalition::from_bits(!s.bits())))))
    })
}

/// Gap `g(S) = Σ_{i∈S} b_i − v(S)` with `b_i = v(N) − v(N∖{i})` satisfies
/// `g ≥ 0` and `g({i}) = min_{S∋i} g(S)`.
pub fn is_semiconvex(game: &TuGame) -> bool {
    let grand = game.grand();
    let utopia: Vec<Rational> = (0..game.players())
        .map(|i| game.value(grand) - game.worth(grand.without(i)))
        .collect();
    let gap = |s: Coalition| -> Rational {
        s.members().map(|i| &utopia[i]).sum::<Rational>() - game.value(s)
    };
    let gaps: Vec<Rational> = game.coalitions().map(gap).collect();
    if gaps.iter().any(|g| g < &int(0)) {
        return false;
    }
    (0..game.players()).all(|i| {
        let own = &gaps[Coalition::singleton(i).index()];
        game.coalitions()
            .filter(|s| s.contains(i))
            .all(|s| &gaps[s.index()] >= own)
    })
}

/// Exact feasibility of `x(S) ≥ v(S)` for all `S`, `x(N) = v(N)`.
pub fn core_nonempty(game: &TuGame) -> bool {
    let n = game.players();
    let mut lp = LinearProgram::new(n, Sense::Minimize);
    for k in 0..n {
        lp.set_free(k);
    }
    for s in game.coalitions() {
        let row: Vec<Rational> = (0..n).map(|k| int(s.contains(k) as i64)).collect();
        if s == game.grand() {
            lp.add_eq(row, game.value(s).clone());
        } else {
            lp.add_ge(row, game.value(s).clone());
        }
    }
    lp.solve().status == LpStatus::Optimal
}

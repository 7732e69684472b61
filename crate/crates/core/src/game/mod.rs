//! TU games, payoffs, excesses and maximum surpluses.

pub mod properties;
pub mod unanimity;

use std::fmt;
use std::ops::Index;

use num_traits::{Signed, Zero};

use crate::coalition::{self, Coalition, MAX_PLAYERS};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

pub use properties::{properties, GameProperties};
pub use unanimity::{game_from_unanimity, unanimity_coords};

/// Characteristic function over the non-empty coalitions of `n` players.
///
/// `values[S.index()]` holds `v(S)`; `v(∅) = 0` is implicit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TuGame {
    n: usize,
    values: Vec<Rational>,
}

impl TuGame {
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if !(2..=MAX_PLAYERS).contains(&n) {
            return Err(Error::PlayerCount(n));
        }
        let expected = (1usize << n) - 1;
        if values.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: values.len(),
            });
        }
        if !values[expected - 1].is_positive() {
            return Err(Error::InvalidGame(format!(
                "grand coalition worth must be positive, got {}",
                values[expected - 1]
            )));
        }
        Ok(TuGame { n, values })
    }

    pub fn from_fn(n: usize, mut worth: impl FnMut(Coalition) -> Rational) -> Result<Self> {
        if !(2..=MAX_PLAYERS).contains(&n) {
            return Err(Error::PlayerCount(n));
        }
        TuGame::new(n, coalition::nonempty(n).map(&mut worth).collect())
    }

    /// Builds a game from `(1-based players, worth)` entries; unlisted coalitions are worth 0.
    pub fn from_entries(n: usize, entries: &[(&[usize], Rational)]) -> Result<Self> {
        if !(2..=MAX_PLAYERS).contains(&n) {
            return Err(Error::PlayerCount(n));
        }
        let mut values = vec![Rational::zero(); (1 << n) - 1];
        for (players, worth) in entries {
            if players.is_empty() || players.iter().any(|&p| p == 0 || p > n) {
                return Err(Error::InvalidGame(format!("bad coalition {players:?}")));
            }
            let zero_based: Vec<usize> = players.iter().map(|p| p - 1).collect();
            values[Coalition::from_players(&zero_based).index()] = worth.clone();
        }
        TuGame::new(n, values)
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    /// `v(S)` for a non-empty coalition.
    pub fn value(&self, s: Coalition) -> &Rational {
        &self.values[s.index()]
    }

    /// `v(S)`, with `v(∅) = 0`.
    pub fn worth(&self, s: Coalition) -> Rational {
        if s.is_empty() {
            Rational::zero()
        } else {
            self.values[s.index()].clone()
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn coalitions(&self) -> impl Iterator<Item = Coalition> {
        coalition::nonempty(self.n)
    }

    pub fn axis_len(&self) -> usize {
        self.values.len()
    }
}

/// Payoff vector; a pre-imputation when `x(N) = v(N)`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Payoff(Vec<Rational>);

impl Payoff {
    pub fn new(values: Vec<Rational>) -> Self {
        Payoff(values)
    }

    pub fn zeros(n: usize) -> Self {
        Payoff(vec![Rational::zero(); n])
    }

    pub fn equal_split(game: &TuGame) -> Self {
        let share = game.value(game.grand()) / int(game.players() as i64);
        Payoff(vec![share; game.players()])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    /// `x(S) = Σ_{k∈S} x_k`.
    pub fn coalition_sum(&self, s: Coalition) -> Rational {
        s.members().map(|k| &self.0[k]).sum()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn is_efficient(&self, game: &TuGame) -> bool {
        &self.total() == game.value(game.grand())
    }

    /// `x^{i,j,δ}`: moves `delta` from player `i` to player `j`.
    pub fn transfer(&self, i: usize, j: usize, delta: &Rational) -> Payoff {
        let mut y = self.0.clone();
        y[i] -= delta;
        y[j] += delta;
        Payoff(y)
    }

    pub fn extend(&self) -> ExtendedPayoff {
        let n = self.0.len();
        let mut sums = vec![Rational::zero(); (1 << n) - 1];
        for s in coalition::nonempty(n) {
            let low = s.bits().trailing_zeros() as usize;
            let rest = s.without(low);
            sums[s.index()] = if rest.is_empty() {
                self.0[low].clone()
            } else {
                &sums[rest.index()] + &self.0[low]
            };
        }
        ExtendedPayoff(sums)
    }
}

impl Index<usize> for Payoff {
    type Output = Rational;

    fn index(&self, k: usize) -> &Rational {
        &self.0[k]
    }
}

impl From<Vec<Rational>> for Payoff {
    fn from(values: Vec<Rational>) -> Self {
        Payoff(values)
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// `x̄`: the additive extension `x(S)` of a payoff over all non-empty coalitions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtendedPayoff(Vec<Rational>);

impl ExtendedPayoff {
    pub fn get(&self, s: Coalition) -> Rational {
        if s.is_empty() {
            Rational::zero()
        } else {
            self.0[s.index()].clone()
        }
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// `ē = v − x̄`.
    pub fn excess_vector(&self, game: &TuGame) -> Vec<Rational> {
        game.values().iter().zip(&self.0).map(|(v, x)| v - x).collect()
    }
}

fn check_dims(game: &TuGame, x: &Payoff) {
    assert_eq!(
        x.len(),
        game.players(),
        "payoff length does not match the player count"
    );
}

/// `e(S,x) = v(S) − x(S)`; zero for the empty coalition.
pub fn excess(game: &TuGame, s: Coalition, x: &Payoff) -> Rational {
    check_dims(game, x);
    game.worth(s) - x.coalition_sum(s)
}

/// All excesses over non-empty coalitions, indexed by `S.index()`.
pub fn excesses(game: &TuGame, x: &Payoff) -> Vec<Rational> {
    check_dims(game, x);
    x.extend().excess_vector(game)
}

/// `G_ij`: coalitions containing `i` but not `j`.
pub fn pair_coalitions(n: usize, i: usize, j: usize) -> impl Iterator<Item = Coalition> {
    let others = Coalition::grand(n).without(i).without(j);
    others.subsets().map(move |s| s.with(i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surplus {
    pub value: Rational,
    /// Every coalition of `G_ij` attaining the maximum, in increasing bitmask order.
    pub coalitions: Vec<Coalition>,
}

/// Maximum surplus `s_ij(x,v)` of `i` over `j`, with all most effective coalitions.
pub fn max_surplus(game: &TuGame, i: usize, j: usize, x: &Payoff) -> Result<Surplus> {
    let n = game.players();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidPair { i, j });
    }
    let e = excesses(game, x);
    let mut best: Option<Rational> = None;
    let mut coalitions = Vec::new();
    for s in pair_coalitions(n, i, j) {
        let value = &e[s.index()];
        match &best {
            Some(b) if value < b => {}
            Some(b) if value == b => coalitions.push(s),
            _ => {
                best = Some(value.clone());
                coalitions = vec![s];
            }
        }
    }
    coalitions.sort();
    Ok(Surplus {
        value: best.expect("G_ij is never empty"),
        coalitions,
    })
}

/// Surplus values `s[i][j]` for all ordered pairs, from a precomputed excess vector.
pub(crate) fn surplus_table(n: usize, e: &[Rational]) -> Vec<Vec<Option<Rational>>> {
    let mut table = vec![vec![None; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = pair_coalitions(n, i, j).map(|s| &e[s.index()]).max().cloned();
            }
        }
    }
    table
}

/// Indirect function `π(x) = max_{S⊆N} (v(S) − x(S))`, the empty set included.
pub fn indirect_pi(game: &TuGame, x: &Payoff) -> Rational {
    excesses(game, x)
        .into_iter()
        .fold(Rational::zero(), |m, e| if e > m { e } else { m })
}

/// `δ₁(v,x) = max_{k, S⊆N∖{k}} |v(S∪{k}) − v(S) − x_k|`.
pub fn delta1(game: &TuGame, x: &Payoff) -> Rational {
    check_dims(game, x);
    let grand = game.grand();
    let mut best = Rational::zero();
    for k in 0..game.players() {
        for s in grand.without(k).subsets() {
            let gap = (game.value(s.with(k)) - game.worth(s) - &x[k]).abs();
            if gap > best {
                best = gap;
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HMode {
    /// `f_ij` from the indirect function at `x^{i,j,δ}` with `δ = δ₁(v,x)`.
    ViaPi,
    /// `f_ij = s_ij − s_ji` directly.
    ViaSurplus,
}

/// `h(x) = Σ_{i<j} f_ij(x)² + (x(N) − v(N))²`.
pub fn h_eval(game: &TuGame, x: &Payoff, mode: HMode) -> Rational {
    check_dims(game, x);
    let n = game.players();
    let efficiency = x.total() - game.value(game.grand());
    let mut h = &efficiency * &efficiency;
    match mode {
        HMode::ViaPi => {
            let delta = delta1(game, x);
            for i in 0..n {
                for j in i + 1..n {
                    let f = indirect_pi(game, &x.transfer(i, j, &delta))
                        - indirect_pi(game, &x.transfer(j, i, &delta));
                    h += &f * &f;
                }
            }
        }
        HMode::ViaSurplus => {
            let table = surplus_table(n, &excesses(game, x));
            for i in 0..n {
                for j in i + 1..n {
                    let f = table[i][j].as_ref().unwrap() - table[j][i].as_ref().unwrap();
                    h += &f * &f;
                }
            }
        }
    }
    h
}

/// Efficient and `s_ij = s_ji` for every pair.
pub fn is_prekernel(game: &TuGame, x: &Payoff) -> bool {
    if !x.is_efficient(game) {
        return false;
    }
    let n = game.players();
    let table = surplus_table(n, &excesses(game, x));
    (0..n).all(|i| (i + 1..n).all(|j| table[i][j] == table[j][i]))
}

/// `max_{i<j} |s_ij − s_ji|`.
pub fn surplus_imbalance(game: &TuGame, x: &Payoff) -> Rational {
    let n = game.players();
    let table = surplus_table(n, &excesses(game, x));
    let mut worst = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (table[i][j].as_ref().unwrap() - table[j][i].as_ref().unwrap()).abs();
            if gap > worst {
                worst = gap;
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::frac;

    fn c(players: &[usize]) -> Coalition {
        Coalition::from_players(&players.iter().map(|p| p - 1).collect::<Vec<_>>())
    }

    #[test]
    fn excess_examples() {
        let v = fixtures::average_convex_default();
        let x = fixtures::default_point();
        assert_eq!(excess(&v, c(&[1, 2]), &x), frac(-32, 9));
        assert_eq!(excess(&v, c(&[2]), &x), int(-4));
        assert_eq!(excess(&v, v.grand(), &x), int(0));
        assert_eq!(excess(&v, Coalition::EMPTY, &x), int(0));
    }

    #[test]
    fn max_surplus_examples() {
        let v = fixtures::average_convex_default();
        let x = fixtures::default_point();
        let s12 = max_surplus(&v, 0, 1, &x).unwrap();
        assert_eq!(s12.value, int(-4));
        assert_eq!(s12.coalitions, vec![c(&[1, 3, 4])]);
        let s21 = max_surplus(&v, 1, 0, &x).unwrap();
        assert_eq!(s21.value, int(-4));
        assert_eq!(s21.coalitions, vec![c(&[2])]);

        let two = fixtures::two_player();
        let s = max_surplus(&two, 0, 1, &Payoff::new(vec![int(1), int(1)])).unwrap();
        assert_eq!(s.value, int(-1));
        assert_eq!(s.coalitions, vec![c(&[1])]);
    }

    #[test]
    fn max_surplus_rejects_diagonal_pair() {
        let v = fixtures::two_player();
        let x = Payoff::new(vec![int(1), int(1)]);
        assert_eq!(
            max_surplus(&v, 1, 1, &x),
            Err(Error::InvalidPair { i: 1, j: 1 })
        );
        assert!(max_surplus(&v, 0, 2, &x).is_err());
    }

    #[test]
    fn indirect_function_examples() {
        let v = fixtures::average_convex_default();
        assert_eq!(indirect_pi(&v, &Payoff::zeros(4)), int(16));
        assert_eq!(indirect_pi(&v, &fixtures::default_point()), int(0));
        let rich = Payoff::new(vec![int(1000); 4]);
        assert_eq!(indirect_pi(&v, &rich), int(0));
    }

    #[test]
    fn delta1_examples() {
        let v = fixtures::average_convex_default();
        assert_eq!(delta1(&v, &fixtures::default_point()), frac(100, 9));
        let two = fixtures::two_player();
        assert_eq!(delta1(&two, &Payoff::new(vec![int(1), int(1)])), int(1));
        let n = 5;
        let flat = TuGame::from_fn(n, |s| {
            if s == Coalition::grand(n) { int(n as i64) } else { int(0) }
        })
        .unwrap();
        assert_eq!(delta1(&flat, &Payoff::new(vec![int(1); n])), int(4));
    }

    #[test]
    fn h_examples() {
        let v = fixtures::average_convex_default();
        let x = fixtures::default_point();
        for mode in [HMode::ViaPi, HMode::ViaSurplus] {
            assert_eq!(h_eval(&v, &x, mode), int(0));
        }
        let two = fixtures::two_player();
        let x = Payoff::new(vec![int(2), int(0)]);
        assert_eq!(h_eval(&two, &x, HMode::ViaSurplus), int(4));
        assert_eq!(h_eval(&two, &x, HMode::ViaPi), int(4));
    }

    #[test]
    fn prekernel_membership_examples() {
        let v = fixtures::average_convex_default();
        assert!(is_prekernel(&v, &fixtures::default_point()));
        assert!(!is_prekernel(&v, &Payoff::new(vec![int(4); 4])));
        let two = fixtures::two_player();
        assert!(is_prekernel(&two, &Payoff::new(vec![int(1), int(1)])));
        assert!(!is_prekernel(&two, &Payoff::new(vec![int(1), int(0)])));
    }

    #[test]
    fn extension_is_additive() {
        let x = Payoff::new(vec![frac(1, 2), int(-3), frac(7, 5), int(2)]);
        let xbar = x.extend();
        for s in coalition::nonempty(4) {
            assert_eq!(xbar.get(s), x.coalition_sum(s));
            for t in coalition::nonempty(4).filter(|t| t.is_disjoint(s)) {
                assert_eq!(xbar.get(s.union(t)), xbar.get(s) + xbar.get(t));
            }
        }
    }

    #[test]
    fn rejects_bad_games() {
        assert!(matches!(TuGame::new(1, vec![int(1)]), Err(Error::PlayerCount(1))));
        assert!(matches!(
            TuGame::new(2, vec![int(1), int(1)]),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            TuGame::new(2, vec![int(0), int(0), int(0)]),
            Err(Error::InvalidGame(_))
        ));
    }
}

//! Independent reference computations for the integration suites. Nothing
//! here calls into the solver beyond reading game values.

#![allow(dead_code)]

use std::path::PathBuf;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use tugames::game::TuGame;
use tugames::io::read_game;
use tugames::rational::{frac, int};
use tugames::{Coalition, Payoff, Rational};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn load(name: &str) -> TuGame {
    read_game(&fixture(name)).expect("fixture parses")
}

pub fn coalition(players: &[usize]) -> Coalition {
    Coalition::from_players(&players.iter().map(|p| p - 1).collect::<Vec<_>>())
}

pub fn point(values: &[(i64, i64)]) -> Payoff {
    Payoff::new(values.iter().map(|&(p, q)| frac(p, q)).collect())
}

pub fn default_point() -> Payoff {
    point(&[(44, 9), (4, 1), (32, 9), (32, 9)])
}

/// `v(S)` by bitmask, zero for the empty set.
pub fn worth(game: &TuGame, mask: u32) -> Rational {
    if mask == 0 {
        Rational::zero()
    } else {
        game.values()[mask as usize - 1].clone()
    }
}

pub fn coalition_sum(x: &Payoff, mask: u32) -> Rational {
    (0..x.len())
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| x[k].clone())
        .sum()
}

/// `s_ij` by scanning every bitmask.
pub fn surplus(game: &TuGame, x: &Payoff, i: usize, j: usize) -> Rational {
    let n = game.players();
    (1u32..1 << n)
        .filter(|m| m >> i & 1 == 1 && m >> j & 1 == 0)
        .map(|m| worth(game, m) - coalition_sum(x, m))
        .max()
        .expect("non-empty")
}

pub fn imbalance(game: &TuGame, x: &Payoff) -> Rational {
    let n = game.players();
    let mut worst = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (surplus(game, x, i, j) - surplus(game, x, j, i)).abs();
            if gap > worst {
                worst = gap;
            }
        }
    }
    worst
}

pub fn prekernel_oracle(game: &TuGame, x: &Payoff) -> bool {
    let n = game.players();
    coalition_sum(x, (1 << n) - 1) == worth(game, (1 << n) - 1) && imbalance(game, x).is_zero()
}

/// Rank by plain Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for k in c..cols {
                    let d = &f * &a[r][k];
                    a[i][k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Unique solution of a square system, `None` if singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for k in c..=n {
            m[c][k] /= &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=n {
                    let d = &f * &m[c][k];
                    m[i][k] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Balancedness by vertex enumeration of `{w ≥ 0 : Σ w_S 1_S = 1_N}`:
/// a strictly positive point exists iff every coordinate is positive at
/// some vertex (average them).
pub fn balanced_by_vertices(collection: &[Coalition], n: usize) -> bool {
    let m = collection.len();
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|k| collection.iter().map(|s| int(s.contains(k) as i64)).collect())
        .collect();
    let r = rank(&a);
    let ones = vec![Rational::one(); n];
    let mut positive = vec![false; m];
    let mut any = false;
    for cols in subsets_of_size(m, r) {
        for rows in subsets_of_size(n, r) {
            let sub: Vec<Vec<Rational>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&c| a[i][c].clone()).collect())
                .collect();
            let rhs: Vec<Rational> = rows.iter().map(|_| Rational::one()).collect();
            let Some(wb) = solve_square(&sub, &rhs) else { continue };
            let mut w = vec![Rational::zero(); m];
            for (c, v) in cols.iter().zip(wb) {
                w[*c] = v;
            }
            if w.iter().any(Signed::is_negative) {
                continue;
            }
            let covers = (0..n).all(|k| {
                let s: Rational = (0..m).map(|c| &a[k][c] * &w[c]).sum();
                s == ones[k]
            });
            if covers {
                any = true;
                for c in 0..m {
                    positive[c] |= w[c].is_positive();
                }
            }
        }
    }
    any && positive.iter().all(|&p| p)
}

/// Positive weights `k/den`, `k = 1..=den`, found by exhaustive search.
pub fn balanced_by_grid(collection: &[Coalition], n: usize, den: u32) -> bool {
    let m = collection.len();
    let mut w = vec![1u32; m];
    loop {
        let ok = (0..n).all(|k| {
            collection
                .iter()
                .zip(&w)
                .filter(|(s, _)| s.contains(k))
                .map(|(_, w)| *w)
                .sum::<u32>()
                == den
        });
        if ok {
            return true;
        }
        let mut i = 0;
        loop {
            if i == m {
                return false;
            }
            w[i] += 1;
            if w[i] <= den {
                break;
            }
            w[i] = 1;
            i += 1;
        }
    }
}

pub fn is_supermodular(game: &TuGame) -> bool {
    let n = game.players();
    let full = 1u32 << n;
    (0..full).all(|s| {
        (0..full).all(|t| {
            worth(game, s | t) + worth(game, s & t) >= worth(game, s) + worth(game, t)
        })
    })
}

pub fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
    frac(rng.gen_range(lo..=hi), rng.gen_range(1..=max_den))
}

pub fn random_game(rng: &mut impl Rng, n: usize) -> TuGame {
    let p = (1usize << n) - 1;
    let mut values: Vec<Rational> = (0..p).map(|_| random_rational(rng, -6, 6, 4)).collect();
    values[p - 1] = random_rational(rng, 1, 12, 3);
    TuGame::new(n, values).expect("valid random game")
}

//! Unanimity coordinates: `v = Σ_T λ_T u_T` with `λ_T = Σ_{S⊆T} (−1)^{t−s} v(S)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::TuGame;
use crate::rational::Rational;

/// Möbius transform of `v`; entry `T.index()` holds `λ_T`.
pub fn unanimity_coords(game: &TuGame) -> Vec<Rational> {
    let n = game.players();
    let mut f: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(game.values().iter().cloned())
        .collect();
    for bit in 0..n {
        for mask in 0..f.len() {
            if mask >> bit & 1 == 1 {
                let lower = f[mask ^ 1 << bit].clone();
                f[mask] -= lower;
            }
        }
    }
    f.remove(0);
    f
}

/// Inverse transform: `v(S) = Σ_{T⊆S} λ_T`.
pub fn game_from_unanimity(n: usize, coords: &[Rational]) -> Result<TuGame> {
    let expected = (1usize << n) - 1;
    if coords.len() != expected {
        return Err(Error::Dimension {
            expected,
            found: coords.len(),
        });
    }
    TuGame::new(n, zeta(n, coords))
}

/// Subset-sum transform on a `2^n − 1` coalition axis.
pub(crate) fn zeta(n: usize, coords: &[Rational]) -> Vec<Rational> {
    let mut f: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(coords.iter().cloned())
        .collect();
    for bit in 0..n {
        for mask in 0..f.len() {
            if mask >> bit & 1 == 1 {
                let lower = f[mask ^ 1 << bit].clone();
                f[mask] += lower;
            }
        }
    }
    f.remove(0);
    f
}

//! Small reference games used by tests, examples and the CLI docs.

use crate::game::{Payoff, TuGame};
use crate::rational::{frac, int};

/// Four-player average-convex, non-convex game:
/// `v(N)=16`, `v(123)=v(124)=v(134)=8`, `v(13)=4`, `v(14)=1`, `v(12)=16/3`, else 0.
pub fn average_convex_default() -> TuGame {
    TuGame::from_entries(
        4,
        &[
            (&[1, 2, 3, 4], int(16)),
            (&[1, 2, 3], int(8)),
            (&[1, 2, 4], int(8)),
            (&[1, 3, 4], int(8)),
            (&[1, 3], int(4)),
            (&[1, 4], int(1)),
            (&[1, 2], frac(16, 3)),
        ],
    )
    .expect("valid fixture")
}

/// Pre-kernel (and pre-nucleolus) of [`average_convex_default`].
pub fn default_point() -> Payoff {
    Payoff::new(vec![frac(44, 9), int(4), frac(32, 9), frac(32, 9)])
}

/// `v(1) = v(2) = 0`, `v(12) = 2`.
pub fn two_player() -> TuGame {
    TuGame::new(2, vec![int(0), int(0), int(2)]).expect("valid fixture")
}

/// Singletons 0, pairs 1, `v(N) = 3`. At `(1,1,1)` every pair's surplus is tied
/// between a singleton and a two-player coalition.
pub fn symmetric_three_player() -> TuGame {
    TuGame::from_fn(3, |s| match s.len() {
        1 => int(0),
        2 => int(1),
        _ => int(3),
    })
    .expect("valid fixture")
}

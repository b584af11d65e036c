//! Common-denominator integer forms of rational weights.

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::InvalidConfiguration("rational weights overflow 128-bit common denominator".into())
}

/// Integers `n_i` and a common denominator `L` with `values[i] = n_i / L`.
pub(crate) fn to_integers(values: &[Rational64]) -> Result<(Vec<i128>, i128)> {
    let mut lcm: i128 = 1;
    for v in values {
        let d = *v.denom() as i128;
        lcm = (lcm / lcm.gcd(&d)).checked_mul(d).ok_or_else(overflow)?;
    }
    let ints = values
        .iter()
        .map(|v| {
            (*v.numer() as i128)
                .checked_mul(lcm / *v.denom() as i128)
                .ok_or_else(overflow)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ints, lcm))
}

/// Signed subset sums `Σ_j ±n_j` for every sign vector, indexed so that bit
/// `j` set means `+`.
pub(crate) fn signed_sums(ints: &[i128]) -> Vec<i128> {
    let l = ints.len();
    (0..1usize << l)
        .map(|x| {
            ints.iter()
                .enumerate()
                .map(|(j, &n)| if x >> j & 1 == 1 { n } else { -n })
                .sum()
        })
        .collect()
}

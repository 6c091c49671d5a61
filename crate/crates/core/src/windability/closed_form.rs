use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, double_factorial, Rational};

fn even_m(m: usize) -> Result<usize> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::WrongParity { m });
    }
    Ok(m / 2)
}

/// Closed-form solution of `A_{2n} x = (>=2) * Even` (prefix form):
/// `x_{2j} = (1 - (-1)^j (2j-1)!! / prod_{i=1}^{j} (2n-2i)) / (2n-1)!!`
/// for `2j <= n`, all other entries zero.
pub fn closed_form_even_part(m: usize) -> Result<Vec<Rational>> {
    let n = even_m(m)? as i64;
    let scale = Rational::from_integer(double_factorial(2 * n - 1));
    let mut x = alloc::vec![Rational::zero(); n as usize + 1];
    for j in 0..=n / 2 {
        let denom: BigInt = (1..=j).map(|i| BigInt::from(2 * n - 2 * i)).product();
        let ratio = Rational::new(double_factorial(2 * j - 1), denom);
        let signed = if j % 2 == 0 { ratio } else { -ratio };
        x[2 * j as usize] = (Rational::one() - signed) / scale.clone();
    }
    Ok(x)
}

/// Closed-form solution of `A_{2n} x = (>=3) * Odd`:
/// `x_{2j+1} = (1 - (-1)^j (2j+1)!! / prod_{i=2}^{j+1} (2n-2i)) / (2n-1)!!`
/// for `2j + 1 <= n`, all other entries zero.
pub fn closed_form_odd_part(m: usize) -> Result<Vec<Rational>> {
    let n = even_m(m)? as i64;
    let scale = Rational::from_integer(double_factorial(2 * n - 1));
    let mut x = alloc::vec![Rational::zero(); n as usize + 1];
    let mut j = 0;
    while 2 * j < n {
        let denom: BigInt = (2..=j + 1).map(|i| BigInt::from(2 * n - 2 * i)).product();
        let ratio = Rational::new(double_factorial(2 * j + 1), denom);
        let signed = if j % 2 == 0 { ratio } else { -ratio };
        x[(2 * j + 1) as usize] = (Rational::one() - signed) / scale.clone();
        j += 1;
    }
    Ok(x)
}

/// Closed-form solution of `A_{2n} x = (>=b)` for `b` in `{1, 2}`.
///
/// The even part is always `(>=2) * Even`; the odd part is `Odd` for `b = 1`
/// (solved by `Odd / (2n-1)!!`) and `(>=3) * Odd` for `b = 2`.
pub fn closed_form_edge_cover(b: usize, m: usize) -> Result<Vec<Rational>> {
    let even = closed_form_even_part(m)?;
    let odd = match b {
        1 => {
            let n = m / 2;
            let inv = Rational::new(BigInt::one(), double_factorial(m as i64 - 1));
            (0..=n).map(|i| if i % 2 == 1 { inv.clone() } else { Rational::zero() }).collect()
        }
        2 => closed_form_odd_part(m)?,
        _ => return Err(Error::OutOfRange(format!("b = {b} must be 1 or 2"))),
    };
    Ok(even.into_iter().zip(odd).map(|(a, b)| a + b).collect())
}

/// `sum_{j=0}^{m} (-1)^j C(m,j) C(n-j,m) / (n-j)`, exactly.
pub fn com_identity_sum(m: usize, n: usize) -> Result<Rational> {
    if m < 1 || n <= m {
        return Err(Error::OutOfRange(format!("need 1 <= m < n, got m = {m}, n = {n}")));
    }
    let (m, n) = (m as i64, n as i64);
    Ok((0..=m).fold(Rational::zero(), |acc, j| {
        let term = Rational::new(binomial(m, j) * binomial(n - j, m), BigInt::from(n - j));
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    }))
}

/// True iff the alternating binomial sum above vanishes.
pub fn verify_com_identity(m: usize, n: usize) -> Result<bool> {
    Ok(com_identity_sum(m, n)?.is_zero())
}

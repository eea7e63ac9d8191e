//! Chebyshev polynomials of the second kind.
//!
//! `U_{N-1}` controls everything resonant in this crate: the transmission
//! through an `N`-impurity barrier is `T = 1/(1 + v_k^2 U_{N-1}^2(h_k))`, so
//! the barrier becomes transparent exactly at the roots of `U_{N-1}`.
//!
//! The evaluator is generic over any [`num_traits::Num`] scalar, not just
//! floats: the identity checks below cancel terms that grow like
//! `(|x| + sqrt(x^2 - 1))^n`, hopelessly ill-conditioned in `f64` for
//! `|x| -> 2` and `n ~ 50`, but exact in rational arithmetic.

use num_traits::{Num, Signed};

use crate::Float;

/// Evaluates `U_n(x)` by the forward recurrence
/// `U_0 = 1`, `U_1 = 2x`, `U_n = 2x U_{n-1} - U_{n-2}`.
///
/// `x` may lie outside `[-1, 1]`; strong impurities push the transfer-matrix
/// argument `h_k` beyond the oscillatory window, where `U_n` grows
/// exponentially (that is the gap regime, not an error).
pub fn cheb_u<T: Num + Clone>(n: u32, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let two_x = x.clone() + x;
    let mut prev = T::one();
    let mut cur = two_x.clone();
    for _ in 1..n {
        let next = two_x.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All `n` roots of `U_n`, strictly ascending and exactly symmetric about 0.
///
/// Closed form `x_j = cos(j pi / (n+1))`, `j = 1..=n`, with one Newton step
/// to absorb the libm rounding; the negative half mirrors the positive half
/// bit-for-bit so antisymmetry is exact. Every root satisfies
/// `|U_n(x_j)| < 1e-12` in `f64`.
///
/// Panics if `n == 0` (`U_0 = 1` has no roots, so asking is a caller bug).
pub fn cheb_u_roots<T: Float>(n: u32) -> Vec<T> {
    assert!(n >= 1, "U_0 is constant and has no roots");
    let n_us = n as usize;
    let mut roots = vec![T::zero(); n_us];
    // positive roots: j < (n+1)/2 puts the cosine argument below pi/2
    let denom = T::from_u32(n + 1).unwrap();
    for j in 1..=(n_us / 2) {
        let theta = T::PI() * T::from_usize(j).unwrap() / denom;
        let x = newton_polish(n, theta.cos());
        roots[n_us - j] = x;
        roots[j - 1] = -x;
    }
    // odd n: the middle root is exactly zero and the loop above skipped it
    roots
}

/// One Newton step for `U_n` at `x`, using
/// `(1 - x^2) U_n'(x) = (n+1) U_{n-1}(x) - n x U_n(x)`.
fn newton_polish<T: Float>(n: u32, x: T) -> T {
    let u_n = cheb_u(n, x);
    let u_nm1 = cheb_u(n - 1, x);
    let np1 = T::from_u32(n + 1).unwrap();
    let nf = T::from_u32(n).unwrap();
    let denom = np1 * u_nm1 - nf * x * u_n;
    if denom == T::zero() {
        return x;
    }
    x - u_n * (T::one() - x * x) / denom
}

/// Residual of the unimodularity identity linking consecutive Chebyshev
/// coefficients, `|U_{n-2}^2 - 2x U_{n-2} U_{n-3} + U_{n-3}^2 - 1|`
/// (with `U_{-1} = 0`), which is identically zero for every `x`.
///
/// The combination is `det(A^{n-1})` for a unimodular 2x2 matrix with trace
/// `2x`, written in the Chebyshev coefficients of its matrix power; it is the
/// closed-form transmission's internal consistency check. Indexed so that `n`
/// is the impurity count whose barrier matrix the identity certifies
/// (`n >= 2`; asserted).
pub fn cheb_identity_residual<T: Num + Signed + Clone>(n: u32, x: T) -> T {
    assert!(n >= 2, "identity is defined for n >= 2");
    let u = cheb_u(n - 2, x.clone());
    let v = if n >= 3 { cheb_u(n - 3, x.clone()) } else { T::zero() };
    let two_x = x.clone() + x;
    (u.clone() * u.clone() - two_x * u * v.clone() + v.clone() * v - T::one()).abs()
}

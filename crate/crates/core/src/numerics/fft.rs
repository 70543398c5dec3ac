use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Forward DFT, `X_k = Σ x_n e^{-2πikn/N}`, unscaled.
pub fn fft<T: Scalar>(x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let mut buf = x.to_vec();
    transform_in_place(&mut buf, false)?;
    Ok(buf)
}

/// Inverse DFT including the `1/N` factor, so `ifft(fft(x)) == x`.
pub fn ifft<T: Scalar>(x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let mut buf = x.to_vec();
    transform_in_place(&mut buf, true)?;
    let scale = T::one() / T::from_usize(buf.len()).unwrap();
    for z in &mut buf {
        *z = *z * scale;
    }
    Ok(buf)
}

/// Iterative radix-2 decimation-in-time Cooley–Tukey.
pub fn transform_in_place<T: Scalar>(buf: &mut [Complex<T>], inverse: bool) -> Result<()> {
    let n = buf.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Length(n));
    }
    if n == 1 {
        return Ok(());
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }

    let sign = if inverse { T::one() } else { -T::one() };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let angle = sign * T::TAU() / T::from_usize(len).unwrap();
        // direct twiddles per butterfly index keep the error from compounding
        let twiddles: Vec<Complex<T>> = (0..half)
            .map(|k| Complex::from_polar(T::one(), angle * T::from_usize(k).unwrap()))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let a = buf[start + k];
                let b = buf[start + k + half] * twiddles[k];
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
    Ok(())
}

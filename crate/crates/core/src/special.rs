//! Sine/cosine integrals and the `phi` functions of exponential integrators.

use num_complex::Complex;

use crate::Real;

const MAX_ITER: usize = 200;

/// Cosine integral `Ci(x)` and the complement `pi/2 - Si(x)` for `x > 0`.
///
/// Power series below `x = 2`, a Lentz continued fraction for `E1(ix)` above;
/// the complement is taken from the continued fraction directly so it keeps
/// full relative precision for large `x`.
pub fn ci_and_si_complement<T: Real>(x: T) -> (T, T) {
    assert!(x > T::zero(), "ci_and_si_complement needs x > 0");
    let eps = T::epsilon();
    let half_pi = T::FRAC_PI_2();
    if x > T::lit(2.0) {
        let tiny = T::min_positive_value() / eps;
        let one = Complex::new(T::one(), T::zero());
        let mut b = Complex::new(T::one(), x);
        let mut c = Complex::new(T::one() / tiny, T::zero());
        let mut d = one / b;
        let mut h = d;
        for i in 2..MAX_ITER {
            let im1 = T::from_usize_lossy(i - 1);
            let a = -(im1 * im1);
            b = b + Complex::new(T::lit(2.0), T::zero());
            d = one / (d * a + b);
            c = b + one / c * a;
            let del = c * d;
            h = h * del;
            if (del.re - T::one()).abs() + del.im.abs() < eps {
                break;
            }
        }
        h = Complex::new(x.cos(), -x.sin()) * h;
        (-h.re, -h.im)
    } else {
        let (mut sum, mut sums, mut sumc) = (T::zero(), T::zero(), T::zero());
        let mut sign = T::one();
        let mut fact = T::one();
        let mut odd = true;
        for k in 1..MAX_ITER {
            let kf = T::from_usize_lossy(k);
            fact = fact * x / kf;
            let term = fact / kf;
            sum = sum + sign * term;
            let err = term / sum.abs();
            if odd {
                sign = -sign;
                sums = sum;
                sum = sumc;
            } else {
                sumc = sum;
                sum = sums;
            }
            if err < eps {
                break;
            }
            odd = !odd;
        }
        let euler = T::lit(0.577_215_664_901_532_9);
        (sumc + x.ln() + euler, half_pi - sums)
    }
}

/// Sine integral `Si(x) = int_0^x sin(u)/u du`, odd in `x`.
pub fn sine_integral<T: Real>(x: T) -> T {
    if x == T::zero() {
        return T::zero();
    }
    let si = T::FRAC_PI_2() - ci_and_si_complement(x.abs()).1;
    if x < T::zero() {
        -si
    } else {
        si
    }
}

/// `int_x^inf cos(u) / u^2 du` for `x > 0`.
pub fn cos_over_square_tail<T: Real>(x: T) -> T {
    x.cos() / x - ci_and_si_complement(x).1
}

/// `int_x^inf cos(u) / u^4 du` for `x > 0`.
pub fn cos_over_quartic_tail<T: Real>(x: T) -> T {
    let (three, six) = (T::lit(3.0), T::lit(6.0));
    x.cos() / (three * x * x * x) - x.sin() / (six * x * x) - cos_over_square_tail(x) / six
}

/// `int_x^inf sin(u) / u^3 du` for `x > 0`.
pub fn sin_over_cube_tail<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    x.sin() / (two * x * x) + x.cos() / (two * x) - ci_and_si_complement(x).1 / two
}

/// `phi_1, phi_2, phi_3` at `z`, where `phi_k(z) = sum_n z^n / (n + k)!`.
///
/// `int_0^h e^{z (h - u)} u^n du = h^{n+1} n! phi_{n+1}(z h)`, which is how the
/// amplitude marcher integrates a polynomial against an exact exponential.
pub fn phi_functions<T: Real>(z: Complex<T>) -> [Complex<T>; 3] {
    let one = Complex::new(T::one(), T::zero());
    if z.norm() < T::one() {
        // sum_{n} z^n / (n + k)! for k = 1, 2, 3, summed from the top down.
        let terms = 22usize;
        let mut out = [Complex::new(T::zero(), T::zero()); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let k = k + 1;
            let mut acc = Complex::new(T::zero(), T::zero());
            for n in (0..terms).rev() {
                // acc = 1/(n+k)! + z * acc, rewritten in Horner form with ratios
                acc = one + z * acc / T::from_usize_lossy(n + k + 1);
            }
            let mut fact = T::one();
            for j in 2..=k {
                fact = fact * T::from_usize_lossy(j);
            }
            *slot = acc / fact;
        }
        out
    } else {
        let e = z.exp();
        let p1 = (e - one) / z;
        let p2 = (p1 - one) / z;
        let p3 = (p2 - one / T::lit(2.0)) / z;
        [p1, p2, p3]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quad_reference(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        // composite Simpson, only for slowly varying reference integrands
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn sine_integral_reference_values() {
        // Si(1), Si(2), Si(5), Si(10) from standard tables
        assert_relative_eq!(sine_integral(1.0), 0.946_083_070_367_183, epsilon = 1e-14);
        assert_relative_eq!(sine_integral(2.0), 1.605_412_976_802_695, epsilon = 1e-14);
        assert_relative_eq!(sine_integral(5.0), 1.549_931_244_944_674, epsilon = 1e-14);
        assert_relative_eq!(sine_integral(10.0), 1.658_347_594_218_874, epsilon = 1e-14);
        assert_relative_eq!(sine_integral(-2.0), -1.605_412_976_802_695, epsilon = 1e-14);
    }

    #[test]
    fn sine_integral_matches_quadrature() {
        for &x in &[0.3, 1.99, 2.01, 7.5] {
            let q = quad_reference(|u| if u == 0.0 { 1.0 } else { u.sin() / u }, 0.0, x, 2000);
            assert_relative_eq!(sine_integral(x), q, epsilon = 1e-12);
        }
    }

    #[test]
    fn cosine_integral_reference() {
        assert_relative_eq!(
            ci_and_si_complement(1.0).0,
            0.337_403_922_900_968_1,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            ci_and_si_complement(10.0).0,
            -0.045_456_433_004_455_37,
            epsilon = 1e-14
        );
    }

    #[test]
    fn large_argument_complement() {
        // pi/2 - Si(x) ~ cos(x)/x (1 - 2/x^2) + sin(x)/x^2 (1 - 6/x^2)
        let x: f64 = 400.0;
        let asym = x.cos() / x * (1.0 - 2.0 / (x * x)) + x.sin() / (x * x) * (1.0 - 6.0 / (x * x));
        assert_relative_eq!(ci_and_si_complement(x).1, asym, max_relative = 1e-8);
    }

    #[test]
    fn tails_match_quadrature() {
        let rule = crate::quadrature::GaussLegendre::<f64>::new(8);
        let panels = |f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize| {
            let h = (b - a) / n as f64;
            (0..n)
                .map(|i| {
                    rule.mapped(a + i as f64 * h, a + (i + 1) as f64 * h)
                        .map(|(x, w)| w * f(x))
                        .sum::<f64>()
                })
                .sum::<f64>()
        };
        for &x in &[0.5, 3.0, 12.0] {
            // cut after 2000 periods; what is left there is below 1e-8
            let end = x + 4000.0 * std::f64::consts::PI;
            let q = panels(&|u: f64| u.cos() / (u * u), x, end, 200_000);
            assert_relative_eq!(cos_over_square_tail(x), q, epsilon = 1e-8);
            let q3 = panels(&|u: f64| u.sin() / (u * u * u), x, end, 200_000);
            assert_relative_eq!(sin_over_cube_tail(x), q3, epsilon = 1e-10);
            let q4 = panels(&|u: f64| u.cos() / u.powi(4), x, end, 200_000);
            assert_relative_eq!(
                cos_over_quartic_tail(x),
                q4,
                epsilon = 1e-10,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn phi_series_and_closed_form_agree_at_switch() {
        for &z in &[
            Complex::new(0.999, 0.0),
            Complex::new(0.0, -0.999),
            Complex::new(-0.7, 0.7),
        ] {
            let s = phi_functions(z);
            let e = z.exp();
            let one = Complex::new(1.0, 0.0);
            let p1 = (e - one) / z;
            let p2 = (p1 - one) / z;
            let p3 = (p2 - one * 0.5) / z;
            for (a, b) in s.iter().zip([p1, p2, p3]) {
                assert!((a - b).norm() < 1e-13, "{a} vs {b}");
            }
        }
        let zero = phi_functions(Complex::new(0.0, 0.0));
        assert_relative_eq!(zero[0].re, 1.0);
        assert_relative_eq!(zero[1].re, 0.5);
        assert_relative_eq!(zero[2].re, 1.0 / 6.0, epsilon = 1e-16);
    }
}

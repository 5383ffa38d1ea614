//! Special functions for p-values: erfc and the regularized upper
//! incomplete gamma, via series/continued-fraction evaluation so stored
//! fixtures never depend on platform libm variance.

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 10_000;

/// Lanczos approximation (g = 7, 9 coefficients).
pub(crate) fn ln_gamma(x: f64) -> f64 {
    #[allow(clippy::excessive_precision)] // published coefficient table
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Lower regularized incomplete gamma P(a, x) by series; x < a + 1.
fn igam_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (a * x.ln() - x - ln_gamma(a)).exp()
}

/// Upper regularized incomplete gamma Q(a, x) by modified Lentz
/// continued fraction; x >= a + 1.
fn igamc_cf(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h * (a * x.ln() - x - ln_gamma(a)).exp()
}

/// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
pub(crate) fn igamc(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - igam_series(a, x)
    } else {
        igamc_cf(a, x)
    }
}

/// Complementary error function via erfc(x) = Q(1/2, x^2) for x >= 0.
pub(crate) fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x == 0.0 {
        return 1.0;
    }
    igamc(0.5, x * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(actual: f64, expected: f64) {
        let tol = 1e-10 * expected.abs().max(1.0);
        assert!(
            (actual - expected).abs() <= tol,
            "got {actual}, want {expected}"
        );
    }

    #[test]
    fn erfc_reference_values() {
        // frozen from an independent scipy run
        close(erfc(0.5), 0.4795001221869535);
        close(erfc(1.0), 0.15729920705028516);
        close(erfc(2.5), 0.00040695201744495886);
        close(erfc(0.0), 1.0);
        close(erfc(-1.0), 2.0 - 0.15729920705028516);
    }

    #[test]
    fn igamc_reference_values() {
        close(igamc(0.5, 2.0), 0.04550026389635857);
        close(igamc(5.0, 10.0), 0.029252688076961124);
        close(igamc(128.0, 128.0), 0.4882455490958771);
        close(igamc(256.0, 240.0), 0.8415096214497283);
        close(igamc(3.0, 0.0), 1.0);
    }

    #[test]
    fn ln_gamma_factorials() {
        close(ln_gamma(1.0), 0.0);
        close(ln_gamma(2.0), 0.0);
        close(ln_gamma(5.0), 24.0f64.ln());
        close(ln_gamma(0.5), std::f64::consts::PI.sqrt().ln());
    }
}

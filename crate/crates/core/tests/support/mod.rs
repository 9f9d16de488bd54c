//! Reference computations for the integration tests. Nothing here calls into
//! the crate's numeric kernels.

#![allow(dead_code)]

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate, Gauss estimate and Kronrod estimate of `|f|`.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut absolute = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let (lo, hi) = (f(c - dx), f(c + dx));
        kronrod += WGK[i] * (lo + hi);
        absolute += WGK[i] * (lo.abs() + hi.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (lo + hi);
        }
    }
    (kronrod * h, gauss * h, absolute * h)
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, g, absolute) = gk15(f, a, b);
    let err = (k - g).abs();
    // Below this the difference is rounding noise and bisecting cannot help.
    let noise = 50.0 * f64::EPSILON * absolute;
    if err <= tol || err <= noise || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod (7/15) integral of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    adapt(&f, a, b, abs_tol, 48)
}

/// Beta(a, b) CDF by quadrature of the density. Endpoint singularities for
/// shapes below 1 are removed with `u = t^a` (left) and `s = (1-t)^b`
/// (right); the density is rescaled by its mode when that is finite.
pub fn beta_cdf_quadrature(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let shift = if a > 1.0 && b > 1.0 {
        let m = (a - 1.0) / (a + b - 2.0);
        (a - 1.0) * m.ln() + (b - 1.0) * (1.0 - m).ln()
    } else {
        0.0
    };
    let density = move |t: f64| ((a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p() - shift).exp();

    let left = |c: f64, tol: f64| -> f64 {
        if a < 1.0 {
            let g = |u: f64| {
                if u <= 0.0 {
                    return (-shift).exp() / a;
                }
                let t = u.powf(1.0 / a);
                ((b - 1.0) * (-t).ln_1p() - shift).exp() / a
            };
            integrate(g, 0.0, c.powf(a), tol)
        } else {
            integrate(
                |t| {
                    if t <= 0.0 {
                        if a == 1.0 {
                            (-shift).exp()
                        } else {
                            0.0
                        }
                    } else {
                        density(t)
                    }
                },
                0.0,
                c,
                tol,
            )
        }
    };
    let right = |c: f64, tol: f64| -> f64 {
        if b < 1.0 {
            let g = |s: f64| {
                if s <= 0.0 {
                    return (-shift).exp() / b;
                }
                let t = 1.0 - s.powf(1.0 / b);
                ((a - 1.0) * t.ln() - shift).exp() / b
            };
            integrate(g, 0.0, (1.0 - c).powf(b), tol)
        } else {
            integrate(
                |t| {
                    if t >= 1.0 {
                        if b == 1.0 {
                            (-shift).exp()
                        } else {
                            0.0
                        }
                    } else {
                        density(t)
                    }
                },
                c,
                1.0,
                tol,
            )
        }
    };

    let coarse = left(0.5, 1e-6) + right(0.5, 1e-6);
    let tol = 1e-15 * coarse;
    let total = left(0.5, tol) + right(0.5, tol);
    if x <= 0.5 {
        left(x, tol) / total
    } else {
        1.0 - right(x, tol) / total
    }
}

/// `I_x(a, b)` for positive integer shapes as a Binomial tail:
/// `sum_{j=a}^{a+b-1} C(a+b-1, j) x^j (1-x)^(a+b-1-j)`.
pub fn beta_cdf_integer(x: f64, a: u32, b: u32) -> f64 {
    let m = a + b - 1;
    (a..=m)
        .map(|j| choose(m, j) * x.powi(j as i32) * (1.0 - x).powi((m - j) as i32))
        .sum()
}

pub fn choose(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Beta quantile by bisection on the quadrature CDF.
pub fn beta_quantile_bisect(p: f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if beta_cdf_quadrature(mid, a, b) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Binomial(n, p) mass by direct products.
pub fn binomial_pmf_direct(n: u32, p: f64, z: u32) -> f64 {
    choose(n, z) * p.powi(z as i32) * (1.0 - p).powi((n - z) as i32)
}

/// Intercept and slope from the 2x2 normal equations, by Cramer's rule.
pub fn line_normal_equations(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    ((sy * sxx - sx * sxy) / det, (n * sxy - sx * sy) / det)
}

/// Affine column map with half-away rounding, written out independently.
pub fn column_of(x: f64, x_min: f64, x_max: f64, width: u32) -> i64 {
    let t = (x - x_min) / (x_max - x_min) * (width - 1) as f64;
    let r = if t >= 0.0 {
        (t + 0.5).floor()
    } else {
        -((-t + 0.5).floor())
    };
    r as i64
}

pub fn row_of(y: f64, y_min: f64, y_max: f64, height: u32) -> i64 {
    column_of(-y, -y_max, -y_min, height)
}

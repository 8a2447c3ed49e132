//! One-dimensional maximization: dense scan followed by golden-section
//! refinement of the best bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iterations {
        if b - a <= f64::EPSILON * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        // ties resolve toward the smaller abscissa
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let candidates = [(a, f(a)), (c, fc), (d, fd), (b, f(b))];
    best_of(&candidates)
}

fn best_of(points: &[(f64, f64)]) -> (f64, f64) {
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for &(x, v) in points {
        if v > best.1 || (v == best.1 && x < best.0) || best.0.is_nan() {
            best = (x, v);
        }
    }
    best
}

/// Maximize `f` over `[a, b]`: sample `n` uniform points, then refine the
/// bracket around the best sample by golden section.
pub fn scan_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> (f64, f64) {
    if b <= a {
        return (a, f(a));
    }
    let n = n.max(2);
    let h = (b - a) / (n - 1) as f64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..n {
        let x = if i == n - 1 { b } else { a + h * i as f64 };
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 { a } else { a + h * (best_i - 1) as f64 };
    let hi = if best_i + 1 >= n { b } else { a + h * (best_i + 1) as f64 };
    let x_best = if best_i == n - 1 { b } else { a + h * best_i as f64 };
    let refined = golden_max(f, lo, hi, 200);
    best_of(&[(x_best, best_v), refined])
}

/// Global minimum and maximum of a smooth function over `[a, b]`.
pub fn extrema<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> (f64, f64) {
    let (_, max) = scan_max(f, a, b, n);
    let (_, neg_min) = scan_max(&|t| -f(t), a, b, n);
    (-neg_min, max)
}

//! Hyperboloid model `{x² + y² − z² = −1, z > 0}` of the hyperbolic plane.

pub type H2 = [f64; 3];

pub const ORIGIN: H2 = [0.0, 0.0, 1.0];

pub fn minkowski(p: &H2, q: &H2) -> f64 {
    p[0] * q[0] + p[1] * q[1] - p[2] * q[2]
}

fn sub(p: &H2, q: &H2) -> H2 {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2]]
}

/// Lifts `(x, y)` to the hyperboloid.
pub fn lift(x: f64, y: f64) -> H2 {
    [x, y, (1.0 + x * x + y * y).sqrt()]
}

/// Re-projects onto the hyperboloid after rounding drift.
pub fn normalize(p: &H2) -> H2 {
    lift(p[0], p[1])
}

pub fn on_hyperboloid(p: &H2, tol: f64) -> bool {
    p[2] > 0.0 && (minkowski(p, p) + 1.0).abs() <= tol * p[2].max(1.0).powi(2)
}

/// Hyperbolic distance; `2·asinh(‖p − q‖/2)` near the diagonal where
/// `arccosh` loses precision.
pub fn distance(p: &H2, q: &H2) -> f64 {
    let c = -minkowski(p, q);
    if c < 2.0 {
        let d = sub(p, q);
        let n2 = minkowski(&d, &d).max(0.0);
        2.0 * (n2.sqrt() / 2.0).asinh()
    } else {
        c.acosh()
    }
}

/// Logarithm map at `p`: tangent vector at `p` pointing to `q` with Minkowski
/// length `d(p, q)`.
pub fn log_map(p: &H2, q: &H2) -> [f64; 3] {
    let d = distance(p, q);
    let c = minkowski(p, q);
    let u = [q[0] + c * p[0], q[1] + c * p[1], q[2] + c * p[2]];
    let n = minkowski(&u, &u).max(0.0).sqrt();
    if n == 0.0 || d == 0.0 {
        return [0.0; 3];
    }
    [d * u[0] / n, d * u[1] / n, d * u[2] / n]
}

/// Exponential map at `p` of a tangent vector `v` (`⟨p, v⟩ = 0`).
pub fn exp_map(p: &H2, v: &[f64; 3]) -> H2 {
    let n = minkowski(v, v).max(0.0).sqrt();
    if n == 0.0 {
        return *p;
    }
    let (ch, sh) = (n.cosh(), n.sinh());
    normalize(&[
        ch * p[0] + sh * v[0] / n,
        ch * p[1] + sh * v[1] / n,
        ch * p[2] + sh * v[2] / n,
    ])
}

/// Point at distance `s` from `p` on the geodesic towards `q`.
pub fn toward(p: &H2, q: &H2, s: f64) -> H2 {
    let v = log_map(p, q);
    let n = minkowski(&v, &v).max(0.0).sqrt();
    if n == 0.0 {
        return *p;
    }
    exp_map(p, &[s * v[0] / n, s * v[1] / n, s * v[2] / n])
}

/// Lorentz boost taking the origin to `p`, as a row-major 3×3 matrix.
pub fn boost(p: &H2) -> [[f64; 3]; 3] {
    let [x, y, z] = *p;
    let k = 1.0 / (1.0 + z);
    [
        [1.0 + x * x * k, x * y * k, x],
        [x * y * k, 1.0 + y * y * k, y],
        [x, y, z],
    ]
}

pub fn apply(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Unit tangent at `p` in direction angle `theta`, transported from the origin.
pub fn unit_tangent(p: &H2, theta: f64) -> [f64; 3] {
    apply(&boost(p), &[theta.cos(), theta.sin(), 0.0])
}

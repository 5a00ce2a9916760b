//! Small root-finding helpers: Brent's bracketing method and a damped
//! Newton iteration for 2-D systems.

/// Brent's method on a bracket with `f(a) f(b) <= 0`. Runs until the
/// bracket is a few ulps wide or `f` hits zero, so the result does not
/// depend on the absolute scale of `f`.
pub(crate) fn brent<F>(mut f: F, a: f64, b: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return b;
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    b
}

/// Bisection until the bracket cannot shrink in floating point.
pub(crate) fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let lo_neg = flo < 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NewtonOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub fd_rel_step: f64,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iter: 50,
            tol: 1e-10,
            fd_rel_step: 1e-6,
            max_halvings: 40,
        }
    }
}

pub(crate) enum NewtonOutcome {
    Converged([f64; 2]),
    Failed(&'static str),
}

/// Damped Newton for `F: R^2 -> R^2` with forward-difference Jacobian
/// (step `fd_rel_step * max(1, |x_i|)`). Steps are halved until the
/// residual norm decreases. `f` returns `None` outside its domain, which
/// also triggers halving. Every accepted iterate is passed to `trace`.
pub(crate) fn newton2<F, T>(
    mut f: F,
    x0: [f64; 2],
    opts: NewtonOptions,
    mut trace: T,
) -> NewtonOutcome
where
    F: FnMut([f64; 2]) -> Option<[f64; 2]>,
    T: FnMut([f64; 2], f64),
{
    let norm = |v: [f64; 2]| v[0].hypot(v[1]);
    let mut x = x0;
    let Some(mut fx) = f(x) else {
        return NewtonOutcome::Failed("initial guess outside the domain");
    };
    let mut nx = norm(fx);
    trace(x, nx);
    for _ in 0..opts.max_iter {
        if nx <= opts.tol {
            return NewtonOutcome::Converged(x);
        }
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let h = opts.fd_rel_step * x[j].abs().max(1.0);
            let mut xp = x;
            xp[j] += h;
            let Some(fp) = f(xp) else {
                return NewtonOutcome::Failed("finite-difference step left the domain");
            };
            for i in 0..2 {
                jac[i][j] = (fp[i] - fx[i]) / h;
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return NewtonOutcome::Failed("singular Jacobian");
        }
        let dx = [
            -(jac[1][1] * fx[0] - jac[0][1] * fx[1]) / det,
            -(-jac[1][0] * fx[0] + jac[0][0] * fx[1]) / det,
        ];
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..opts.max_halvings {
            let trial = [x[0] + t * dx[0], x[1] + t * dx[1]];
            if let Some(ft) = f(trial) {
                let nt = norm(ft);
                if nt < nx {
                    x = trial;
                    fx = ft;
                    nx = nt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        trace(x, nx);
        if !accepted {
            return NewtonOutcome::Failed("damping could not reduce the residual");
        }
    }
    if nx <= opts.tol {
        NewtonOutcome::Converged(x)
    } else {
        NewtonOutcome::Failed("iteration limit reached")
    }
}

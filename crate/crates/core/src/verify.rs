//! Numeric cross-checks: bind every symbol to a number, integrate
//! `dx/dt = F x + s` with classical fourth-order Runge-Kutta and compare
//! against the exact steady state.
//!
//! This is a verification aid with a fixed step, not a general ODE solver.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::laplacian::SdSystem;
use crate::symexpr::{exact_bindings, FloatBindings, RationalExpr};

/// `F` and `s` with all labels bound to numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSystem {
    n: usize,
    /// Row-major `F`.
    f: Vec<f64>,
    s: Vec<f64>,
    bindings: FloatBindings,
}

impl NumericSystem {
    /// Evaluates `F` and `s` exactly under `bindings`, rounding each entry
    /// once at the end.
    pub fn bind(system: &SdSystem, bindings: &FloatBindings) -> Result<Self> {
        let exact = exact_bindings(bindings)?;
        let eval = |e: &RationalExpr| -> Result<f64> {
            let v = e.eval(&exact)?;
            let x = num_traits::ToPrimitive::to_f64(&v).unwrap_or(f64::NAN);
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::InvalidParameter("bound value is not finite"))
            }
        };
        let n = system.len();
        let f = (0..n * n)
            .map(|k| eval(&system.f[(k / n, k % n)]))
            .collect::<Result<Vec<_>>>()?;
        let s = system.synthesis.iter().map(eval).collect::<Result<Vec<_>>>()?;
        Ok(NumericSystem {
            n,
            f,
            s,
            bindings: bindings.clone(),
        })
    }

    /// From a dense row-major `F` and `s`.
    pub fn from_dense(f: Vec<Vec<f64>>, s: Vec<f64>) -> Result<Self> {
        let n = s.len();
        if f.len() != n || f.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("F must be square and match s"));
        }
        let f: Vec<f64> = f.into_iter().flatten().collect();
        if f.iter().chain(&s).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("entries must be finite"));
        }
        Ok(NumericSystem {
            n,
            f,
            s,
            bindings: FloatBindings::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn f(&self, i: usize, j: usize) -> f64 {
        self.f[i * self.n + j]
    }

    pub fn synthesis(&self) -> &[f64] {
        &self.s
    }

    pub fn bindings(&self) -> &FloatBindings {
        &self.bindings
    }

    /// Degradation rates, recovered as minus the column sums of `F`.
    pub fn degradation(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| -(0..self.n).map(|i| self.f(i, j)).sum::<f64>())
            .collect()
    }

    fn derivative(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.f[i * self.n..(i + 1) * self.n];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.s[i];
        }
    }

    fn diagonal_magnitudes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.f(i, i).abs())
    }

    /// `0.01 / max |F_ii|`, or `0.01` when the diagonal vanishes.
    pub fn default_dt(&self) -> f64 {
        let max = self.diagonal_magnitudes().fold(0.0, f64::max);
        if max > 0.0 {
            0.01 / max
        } else {
            0.01
        }
    }

    /// `50 / min nonzero |F_ii|`, a proxy for the slowest relaxation time.
    pub fn default_horizon(&self) -> f64 {
        let min = self
            .diagonal_magnitudes()
            .filter(|&d| d > 0.0)
            .fold(f64::INFINITY, f64::min);
        if min.is_finite() {
            50.0 / min
        } else {
            50.0
        }
    }
}

/// Terminal state of a fixed-step run.
#[derive(Clone, Debug, PartialEq)]
pub struct Integration {
    pub state: Vec<f64>,
    pub time: f64,
    pub steps: usize,
    /// Max-norm gap between one full step and two half steps over the final
    /// interval.
    pub error_estimate: f64,
}

fn rk4_step(sys: &NumericSystem, x: &[f64], h: f64, scratch: &mut [Vec<f64>; 5]) -> Vec<f64> {
    let n = x.len();
    let [k1, k2, k3, k4, tmp] = scratch;
    sys.derivative(x, k1);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k1[i];
    }
    sys.derivative(tmp, k2);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k2[i];
    }
    sys.derivative(tmp, k3);
    for i in 0..n {
        tmp[i] = x[i] + h * k3[i];
    }
    sys.derivative(tmp, k4);
    (0..n)
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Classical RK4 from `x0` over `[0, t_end]` with step `dt`; the last step is
/// shortened to land on `t_end`.
pub fn integrate(sys: &NumericSystem, x0: &[f64], dt: f64, t_end: f64) -> Result<Integration> {
    integrate_with(sys, x0, dt, t_end, None, |_, _| {})
}

/// [`integrate`] with an optional magnitude bound, beyond which the run is
/// reported as diverged, and an observer called at `t = 0` and after every
/// step.
pub fn integrate_with<O>(
    sys: &NumericSystem,
    x0: &[f64],
    dt: f64,
    t_end: f64,
    bound: Option<f64>,
    mut observe: O,
) -> Result<Integration>
where
    O: FnMut(f64, &[f64]),
{
    if x0.len() != sys.len() {
        return Err(Error::ShapeMismatch(
            "initial condition length differs from vertex count",
        ));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter("dt must be positive"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter("t_end must be positive"));
    }
    let n = sys.len();
    let mut scratch: [Vec<f64>; 5] = core::array::from_fn(|_| alloc::vec![0.0; n]);
    let mut x = x0.to_vec();
    let mut t = 0.0;
    let mut steps = 0;
    let mut error_estimate = 0.0;
    observe(t, &x);
    while t < t_end {
        let h = dt.min(t_end - t);
        let last = t + h >= t_end;
        let next = rk4_step(sys, &x, h, &mut scratch);
        if last {
            let mid = rk4_step(sys, &x, h / 2.0, &mut scratch);
            let fine = rk4_step(sys, &mid, h / 2.0, &mut scratch);
            error_estimate = max_abs_diff(&next, &fine);
        }
        t = if last { t_end } else { t + h };
        steps += 1;
        x = next;
        let too_big = bound.is_some_and(|b| x.iter().any(|v| v.abs() > b));
        if x.iter().any(|v| !v.is_finite()) || too_big {
            return Err(Error::Diverged { time: t });
        }
        observe(t, &x);
    }
    Ok(Integration {
        state: x,
        time: t,
        steps,
        error_estimate,
    })
}

/// Integrates in chunks of `chunk` until the state is within `tol` (relative
/// to `1 + |x|_inf`) of its limit, or `max_time` is reached. The remaining
/// distance is extrapolated from the geometric decay of successive chunk
/// displacements, so slow modes are followed past any fixed horizon.
pub fn settle(sys: &NumericSystem, x0: &[f64], dt: f64, chunk: f64, tol: f64, max_time: f64) -> Result<Integration> {
    if !(tol > 0.0 && max_time >= chunk) {
        return Err(Error::InvalidParameter("settle needs tol > 0 and max_time >= chunk"));
    }
    let mut run = integrate(sys, x0, dt, chunk)?;
    let mut moved = max_abs_diff(&run.state, x0);
    while run.time + chunk <= max_time {
        let next = integrate(sys, &run.state, dt, chunk)?;
        let step = max_abs_diff(&next.state, &run.state);
        let scale = 1.0 + next.state.iter().fold(0.0, |m, v| f64::max(m, v.abs()));
        run = Integration {
            state: next.state,
            time: run.time + chunk,
            steps: run.steps + next.steps,
            error_estimate: next.error_estimate,
        };
        let ratio = step / moved;
        if step <= f64::MIN_POSITIVE || (ratio < 1.0 && step * ratio / (1.0 - ratio) <= tol * scale) {
            break;
        }
        moved = step;
    }
    Ok(run)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `max_i |(F x + s)_i|`.
pub fn residual(sys: &NumericSystem, x: &[f64]) -> f64 {
    let mut out = alloc::vec![0.0; sys.len()];
    sys.derivative(x, &mut out);
    out.iter().fold(0.0, |m, v| f64::max(m, v.abs()))
}

/// `sum d_i x_i - sum s_i`: net outflow minus inflow.
pub fn balance_defect(sys: &NumericSystem, x: &[f64]) -> f64 {
    let out: f64 = sys.degradation().iter().zip(x).map(|(d, v)| d * v).sum();
    out - sys.s.iter().sum::<f64>()
}

/// `|a - b|_inf / (1 + |b|_inf)`.
pub fn relative_distance(a: &[f64], b: &[f64]) -> f64 {
    let scale = 1.0 + b.iter().fold(0.0, |m, v| f64::max(m, v.abs()));
    max_abs_diff(a, b) / scale
}

/// Integrates to `t_end` and decides whether the trajectory grows without
/// bound. A convergent system ends with inflow and outflow balanced; a system
/// without a steady state keeps a positive net inflow that piles up in some
/// degradation-free terminal component, so the total amount keeps rising.
/// Returns the detection time.
pub fn detect_divergence(sys: &NumericSystem, x0: &[f64], dt: f64, t_end: f64, tol: f64) -> Result<Option<f64>> {
    let half = match integrate(sys, x0, dt, t_end / 2.0) {
        Ok(r) => r,
        Err(Error::Diverged { time }) => return Ok(Some(time)),
        Err(e) => return Err(e),
    };
    let full = match integrate(sys, &half.state, dt, t_end / 2.0) {
        Ok(r) => r,
        Err(Error::Diverged { time }) => return Ok(Some(t_end / 2.0 + time)),
        Err(e) => return Err(e),
    };
    let inflow: f64 = sys.synthesis().iter().sum();
    let defect = -balance_defect(sys, &full.state);
    let mass_half: f64 = half.state.iter().sum();
    let mass_full: f64 = full.state.iter().sum();
    let growing = mass_full - mass_half > tol * (1.0 + mass_half.abs());
    Ok((defect > tol * (1.0 + inflow) && growing).then_some(t_end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{Analysis, InverseMethod};
    use crate::graph::fixtures::*;
    use crate::graph::LabeledDigraph;
    use crate::laplacian::build_system;
    use crate::symexpr::Symbol;

    fn bindings(pairs: &[(&str, f64)]) -> FloatBindings {
        pairs.iter().map(|(n, v)| (Symbol::named(n), *v)).collect()
    }

    #[test]
    fn single_vertex_relaxes() {
        let sys = NumericSystem::from_dense(alloc::vec![alloc::vec![-1.0]], alloc::vec![2.0]).unwrap();
        let r = integrate(&sys, &[0.0], 0.01, 40.0).unwrap();
        assert!((r.state[0] - 2.0).abs() < 1e-8);
        assert_eq!(r.time, 40.0);
        assert!(r.error_estimate < 1e-12);
    }

    #[test]
    fn residual_is_linear() {
        let sys = NumericSystem::from_dense(
            alloc::vec![alloc::vec![-2.0, 1.0], alloc::vec![2.0, -3.0]],
            alloc::vec![1.0, 0.5],
        )
        .unwrap();
        assert_eq!(residual(&sys, &[1.0, 1.0]), 0.5);
        // x = (1, 1) + 0.25 e1 adds 0.25 * |F e1|_inf
        let exact = [0.875, 0.75];
        assert!(residual(&sys, &exact) < 1e-12);
        let eps = 1e-3;
        assert!((residual(&sys, &[exact[0] + eps, exact[1]]) - 2.0 * eps).abs() < 1e-12);
        assert_eq!(sys.degradation(), [0.0, 2.0]);
    }

    #[test]
    fn worked_example_converges_to_exact_state() {
        let g = two_sinks(false, false);
        let a = Analysis::new(&g).unwrap();
        let report = a.steady_state(None, InverseMethod::Mtt).unwrap();
        let mut b = bindings(&[
            ("a", 1.3),
            ("b", 0.7),
            ("c", 0.9),
            ("d", 1.1),
            ("e", 0.6),
            ("f", 1.7),
            ("h", 0.8),
            ("i", 1.2),
            ("k", 0.5),
        ]);
        let x0 = [0.3, 1.0, 0.2, 0.4, 0.0];
        for (v, x) in x0.iter().enumerate() {
            b.insert(crate::equilibrium::initial_symbol(v), *x);
        }
        let sys = NumericSystem::bind(&build_system(&g), &b).unwrap();
        let expected: Vec<f64> = report.x_es.iter().map(|e| e.eval_f64(&b).unwrap()).collect();
        assert!(residual(&sys, &expected) < 1e-12);
        let r = integrate(&sys, &x0, sys.default_dt(), sys.default_horizon()).unwrap();
        assert!(relative_distance(&r.state, &expected) < 1e-6);
        assert!(balance_defect(&sys, &r.state).abs() < 1e-8);
    }

    #[test]
    fn violating_network_diverges() {
        let g = two_sinks(false, true);
        let b = bindings(&[
            ("a", 1.0),
            ("b", 1.0),
            ("c", 1.0),
            ("d", 1.0),
            ("e", 1.0),
            ("f", 1.0),
            ("h", 1.0),
            ("i", 1.0),
            ("k", 1.0),
            ("l", 0.5),
        ]);
        let sys = NumericSystem::bind(&build_system(&g), &b).unwrap();
        let x0 = [0.0; 5];
        let t = sys.default_horizon();
        assert!(detect_divergence(&sys, &x0, sys.default_dt(), t, 1e-6)
            .unwrap()
            .is_some());
        let r = integrate(&sys, &x0, sys.default_dt(), t).unwrap();
        // vertex 5 gains l per unit time
        assert!((r.state[4] - 0.5 * t).abs() / t < 0.05);
        let err = integrate_with(&sys, &x0, 0.01, 1000.0, Some(10.0), |_, _| {}).unwrap_err();
        assert!(matches!(err, Error::Diverged { time } if time > 10.0 && time < 30.0));

        let ok = NumericSystem::bind(&build_system(&two_sinks(false, false)), &b).unwrap();
        assert!(detect_divergence(&ok, &x0, ok.default_dt(), t, 1e-6).unwrap().is_none());
    }

    #[test]
    fn observer_sees_every_step() {
        let mut g = LabeledDigraph::new();
        g.add_synthesis("x", s("s")).unwrap();
        g.add_degradation("x", s("d")).unwrap();
        let sys = NumericSystem::bind(&build_system(&g), &bindings(&[("s", 1.0), ("d", 1.0)])).unwrap();
        let mut times = Vec::new();
        let r = integrate_with(&sys, &[0.0], 0.3, 1.0, None, |t, _| times.push(t)).unwrap();
        assert_eq!(r.steps, 4);
        assert_eq!(times.len(), 5);
        assert_eq!(*times.last().unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let sys = NumericSystem::from_dense(alloc::vec![alloc::vec![-1.0]], alloc::vec![1.0]).unwrap();
        assert!(integrate(&sys, &[0.0], 0.0, 1.0).is_err());
        assert!(integrate(&sys, &[0.0], 0.1, -1.0).is_err());
        assert!(integrate(&sys, &[0.0, 1.0], 0.1, 1.0).is_err());
        assert!(NumericSystem::from_dense(alloc::vec![alloc::vec![f64::NAN]], alloc::vec![1.0]).is_err());
        let missing = NumericSystem::bind(&build_system(&three_cycle()), &FloatBindings::new());
        assert!(matches!(missing, Err(Error::MissingBinding(_))));
    }
}

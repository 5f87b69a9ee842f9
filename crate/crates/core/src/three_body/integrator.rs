//! Fixed-step Gragg-Bulirsch-Stoer integration: modified midpoint rule with
//! step counts 2, 4, 6, 8 and polynomial extrapolation in `h^2`, giving an
//! explicit method of order 8.

use super::{first_integrals, norm, sub, ThreeBodySystem, Vec3, PAIRS};
use crate::error::{Error, Result};

type State = [f64; 18];

const SUBSTEPS: [usize; 4] = [2, 4, 6, 8];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationControls {
    /// Signed step; negative integrates backwards in time.
    pub dt: f64,
    /// Abort once any mutual distance drops below this.
    pub min_distance: f64,
}

impl IntegrationControls {
    pub fn new(dt: f64, min_distance: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::domain(
                "IntegrationControls",
                format!("dt = {dt} must be finite and nonzero"),
            ));
        }
        if !(min_distance >= 0.0) {
            return Err(Error::domain(
                "IntegrationControls",
                format!("min_distance = {min_distance} must be >= 0"),
            ));
        }
        Ok(IntegrationControls { dt, min_distance })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub system: ThreeBodySystem,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// `max |h(t) - h(0)|` over the samples.
    pub energy_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectory has its initial sample")
    }
}

fn pack(sys: &ThreeBodySystem) -> State {
    let mut y = [0.0; 18];
    for i in 0..3 {
        y[3 * i..3 * i + 3].copy_from_slice(&sys.positions()[i]);
        y[9 + 3 * i..9 + 3 * i + 3].copy_from_slice(&sys.velocities()[i]);
    }
    y
}

fn unpack(y: &State) -> ([Vec3; 3], [Vec3; 3]) {
    let mut pos = [[0.0; 3]; 3];
    let mut vel = [[0.0; 3]; 3];
    for i in 0..3 {
        pos[i].copy_from_slice(&y[3 * i..3 * i + 3]);
        vel[i].copy_from_slice(&y[9 + 3 * i..9 + 3 * i + 3]);
    }
    (pos, vel)
}

fn rhs(masses: &[f64; 3], y: &State, floor: f64) -> Result<State> {
    let (pos, _) = unpack(y);
    for (i, j) in PAIRS {
        let r = norm(sub(pos[i], pos[j]));
        if !(r > floor) {
            return Err(Error::Singular(format!(
                "bodies {} and {} at distance {r} (floor {floor})",
                i + 1,
                j + 1
            )));
        }
    }
    let acc = super::accelerations_of(masses, &pos)?;
    let mut dy = [0.0; 18];
    dy[..9].copy_from_slice(&y[9..]);
    for i in 0..3 {
        dy[9 + 3 * i..9 + 3 * i + 3].copy_from_slice(&acc[i]);
    }
    Ok(dy)
}

fn axpy(a: f64, x: &State, y: &State) -> State {
    let mut out = [0.0; 18];
    for k in 0..18 {
        out[k] = a * x[k] + y[k];
    }
    out
}

fn modified_midpoint(
    masses: &[f64; 3],
    y0: &State,
    f0: &State,
    big_h: f64,
    n: usize,
    floor: f64,
) -> Result<State> {
    let h = big_h / n as f64;
    let mut prev = *y0;
    let mut cur = axpy(h, f0, y0);
    for _ in 1..n {
        let next = axpy(2.0 * h, &rhs(masses, &cur, floor)?, &prev);
        prev = cur;
        cur = next;
    }
    let fin = rhs(masses, &cur, floor)?;
    let mut out = [0.0; 18];
    for k in 0..18 {
        out[k] = 0.5 * (cur[k] + prev[k] + h * fin[k]);
    }
    Ok(out)
}

fn step_state(masses: &[f64; 3], y0: &State, big_h: f64, floor: f64) -> Result<State> {
    let f0 = rhs(masses, y0, floor)?;
    // rows of the Neville tableau, T[j][k] extrapolates T[j][0] over k levels
    let mut prev_row: Vec<State> = Vec::new();
    for (j, &n) in SUBSTEPS.iter().enumerate() {
        let mut row = vec![modified_midpoint(masses, y0, &f0, big_h, n, floor)?];
        for k in 1..=j {
            let ratio = (n as f64 / SUBSTEPS[j - k] as f64).powi(2);
            let (a, b) = (&row[k - 1], &prev_row[k - 1]);
            let mut next = [0.0; 18];
            for c in 0..18 {
                next[c] = a[c] + (a[c] - b[c]) / (ratio - 1.0);
            }
            row.push(next);
        }
        prev_row = row;
    }
    Ok(*prev_row.last().expect("extrapolation tableau"))
}

/// One extrapolated step of size `h` (may be negative).
pub fn gbs_step(sys: &ThreeBodySystem, h: f64, min_distance: f64) -> Result<ThreeBodySystem> {
    let y = step_state(&sys.masses(), &pack(sys), h, min_distance)?;
    let (pos, vel) = unpack(&y);
    Ok(sys.with_state(pos, vel))
}

/// `steps` fixed steps of `controls.dt`, keeping every state.
pub fn integrate(
    sys: &ThreeBodySystem,
    controls: &IntegrationControls,
    steps: usize,
) -> Result<Trajectory> {
    let h0 = first_integrals(sys).energy;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample {
        t: 0.0,
        system: *sys,
    });
    let mut drift: f64 = 0.0;
    let mut cur = *sys;
    for n in 1..=steps {
        cur = gbs_step(&cur, controls.dt, controls.min_distance).map_err(|e| match e {
            Error::Singular(msg) => Error::Singular(format!(
                "close approach during step {n} (t = {}): {msg}",
                (n - 1) as f64 * controls.dt
            )),
            other => other,
        })?;
        drift = drift.max((first_integrals(&cur).energy - h0).abs());
        samples.push(TrajectorySample {
            t: n as f64 * controls.dt,
            system: cur,
        });
    }
    Ok(Trajectory {
        samples,
        energy_drift: drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::three_body::norm;

    fn figure_eight() -> ThreeBodySystem {
        let p = [0.97000436, -0.24308753, 0.0];
        let v3 = [-0.93240737, -0.86473146, 0.0];
        ThreeBodySystem::new(
            [1.0; 3],
            [p, [-p[0], -p[1], 0.0], [0.0; 3]],
            [
                [-0.5 * v3[0], -0.5 * v3[1], 0.0],
                [-0.5 * v3[0], -0.5 * v3[1], 0.0],
                v3,
            ],
        )
        .unwrap()
    }

    fn state_distance(a: &ThreeBodySystem, b: &ThreeBodySystem) -> f64 {
        (0..3)
            .map(|i| {
                norm(sub(a.positions()[i], b.positions()[i]))
                    + norm(sub(a.velocities()[i], b.velocities()[i]))
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn conserves_energy_on_figure_eight() {
        let sys = figure_eight();
        let traj = integrate(&sys, &IntegrationControls::new(0.01, 1e-6).unwrap(), 100).unwrap();
        assert!(traj.energy_drift < 1e-8, "{}", traj.energy_drift);
        assert!((traj.last().t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn time_reversal() {
        let sys = figure_eight();
        let fwd = integrate(&sys, &IntegrationControls::new(0.01, 1e-6).unwrap(), 100).unwrap();
        let back = integrate(
            &fwd.last().system,
            &IntegrationControls::new(-0.01, 1e-6).unwrap(),
            100,
        )
        .unwrap();
        assert!(state_distance(&back.last().system, &sys) < 1e-8);
    }

    #[test]
    fn eighth_order_convergence() {
        let sys = figure_eight();
        let reference =
            integrate(&sys, &IntegrationControls::new(0.0125, 1e-6).unwrap(), 80).unwrap();
        let e1 = state_distance(
            &integrate(&sys, &IntegrationControls::new(0.1, 1e-6).unwrap(), 10)
                .unwrap()
                .last()
                .system,
            &reference.last().system,
        );
        let e2 = state_distance(
            &integrate(&sys, &IntegrationControls::new(0.05, 1e-6).unwrap(), 20)
                .unwrap()
                .last()
                .system,
            &reference.last().system,
        );
        let order = (e1 / e2).log2();
        assert!(order > 7.0, "observed order {order} ({e1} -> {e2})");
    }

    #[test]
    fn resting_bodies_barely_move() {
        let sys = ThreeBodySystem::new(
            [1.0; 3],
            [[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            [[0.0; 3]; 3],
        )
        .unwrap();
        let dt = 1e-4;
        let next = gbs_step(&sys, dt, 0.0).unwrap();
        // x(dt) = x(0) + a dt^2 / 2 + O(dt^4)
        let a = crate::three_body::accelerations(&sys).unwrap();
        for i in 0..3 {
            for c in 0..3 {
                let expected = sys.positions()[i][c] + 0.5 * a[i][c] * dt * dt;
                assert!((next.positions()[i][c] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn close_approach_aborts() {
        let sys = ThreeBodySystem::new(
            [1.0; 3],
            [[0.0; 3], [1.0, 0.0, 0.0], [0.0, 50.0, 0.0]],
            [[0.0; 3]; 3],
        )
        .unwrap();
        let err = integrate(&sys, &IntegrationControls::new(0.01, 0.1).unwrap(), 200).unwrap_err();
        assert!(
            matches!(err, Error::Singular(ref m) if m.contains("bodies 1 and 2")),
            "{err}"
        );
    }
}

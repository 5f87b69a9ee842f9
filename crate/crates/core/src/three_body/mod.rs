//! Newtonian three-body problem with `G = 1`: equations of motion, first
//! integrals, Sundman's analyticity strip and the collision certificate.

mod collision;
mod integrator;

pub use collision::{
    collision_check, observe_returns, CollisionReport, ObservedReturns, Side, Verdict,
};
pub use integrator::{gbs_step, integrate, IntegrationControls, Trajectory, TrajectorySample};

use crate::conformal::TaylorData;
use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

/// Unordered pair of distinct bodies, stored 0-based with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pair {
    i: usize,
    j: usize,
}

impl Pair {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i >= 3 || j >= 3 || i == j {
            return Err(Error::domain(
                "Pair",
                format!("({i}, {j}) is not a pair of distinct bodies 0..3"),
            ));
        }
        Ok(Pair {
            i: i.min(j),
            j: i.max(j),
        })
    }

    pub fn first(&self) -> usize {
        self.i
    }

    pub fn second(&self) -> usize {
        self.j
    }
}

pub(crate) const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Snapshot of three point masses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeBodySystem {
    masses: [f64; 3],
    positions: [Vec3; 3],
    velocities: [Vec3; 3],
}

impl ThreeBodySystem {
    pub fn new(masses: [f64; 3], positions: [Vec3; 3], velocities: [Vec3; 3]) -> Result<Self> {
        for (i, m) in masses.iter().enumerate() {
            if !(*m > 0.0 && m.is_finite()) {
                return Err(Error::domain(
                    "ThreeBodySystem",
                    format!("mass {} = {m} must be positive", i + 1),
                ));
            }
        }
        if positions
            .iter()
            .chain(&velocities)
            .flatten()
            .any(|x| !x.is_finite())
        {
            return Err(Error::domain(
                "ThreeBodySystem",
                "non-finite position or velocity",
            ));
        }
        let sys = ThreeBodySystem {
            masses,
            positions,
            velocities,
        };
        for (i, j) in PAIRS {
            if sys.distance(i, j) == 0.0 {
                return Err(Error::Singular(format!(
                    "bodies {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(sys)
    }

    pub fn masses(&self) -> [f64; 3] {
        self.masses
    }

    pub fn positions(&self) -> [Vec3; 3] {
        self.positions
    }

    pub fn velocities(&self) -> [Vec3; 3] {
        self.velocities
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        norm(sub(self.positions[i], self.positions[j]))
    }

    pub fn min_distance(&self) -> f64 {
        PAIRS
            .iter()
            .map(|&(i, j)| self.distance(i, j))
            .fold(f64::INFINITY, f64::min)
    }

    /// Same system seen from its barycentre, moving with it.
    pub fn center_of_mass(&self) -> Self {
        let gamma = self.total_mass();
        let mut shifted = *self;
        for c in 0..3 {
            let x: f64 = (0..3)
                .map(|i| self.masses[i] * self.positions[i][c])
                .sum::<f64>()
                / gamma;
            let v: f64 = (0..3)
                .map(|i| self.masses[i] * self.velocities[i][c])
                .sum::<f64>()
                / gamma;
            for i in 0..3 {
                shifted.positions[i][c] -= x;
                shifted.velocities[i][c] -= v;
            }
        }
        shifted
    }

    pub(crate) fn with_state(&self, positions: [Vec3; 3], velocities: [Vec3; 3]) -> Self {
        ThreeBodySystem {
            masses: self.masses,
            positions,
            velocities,
        }
    }
}

/// Accelerations `a_i = -sum_{j != i} m_j (R_i - R_j) / r_ij^3`.
pub fn accelerations(sys: &ThreeBodySystem) -> Result<[Vec3; 3]> {
    accelerations_of(&sys.masses, &sys.positions)
}

pub(crate) fn accelerations_of(masses: &[f64; 3], positions: &[Vec3; 3]) -> Result<[Vec3; 3]> {
    let mut acc = [[0.0; 3]; 3];
    for (i, j) in PAIRS {
        let d = sub(positions[i], positions[j]);
        let r = norm(d);
        if !(r > 0.0) {
            return Err(Error::Singular(format!(
                "bodies {} and {} coincide",
                i + 1,
                j + 1
            )));
        }
        let inv3 = 1.0 / (r * r * r);
        for c in 0..3 {
            acc[i][c] -= masses[j] * d[c] * inv3;
            acc[j][c] += masses[i] * d[c] * inv3;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstIntegrals {
    pub kinetic: f64,
    pub potential: f64,
    /// `h = T + U`.
    pub energy: f64,
    pub momentum: Vec3,
    pub angular_momentum: Vec3,
}

pub fn first_integrals(sys: &ThreeBodySystem) -> FirstIntegrals {
    let m = sys.masses;
    let kinetic = 0.5
        * (0..3)
            .map(|i| m[i] * dot(sys.velocities[i], sys.velocities[i]))
            .sum::<f64>();
    let potential = -PAIRS
        .iter()
        .map(|&(i, j)| m[i] * m[j] / sys.distance(i, j))
        .sum::<f64>();
    let mut momentum = [0.0; 3];
    let mut angular_momentum = [0.0; 3];
    for i in 0..3 {
        let l = cross(sys.positions[i], sys.velocities[i]);
        for c in 0..3 {
            momentum[c] += m[i] * sys.velocities[i][c];
            angular_momentum[c] += m[i] * l[c];
        }
    }
    FirstIntegrals {
        kinetic,
        potential,
        energy: kinetic + potential,
        momentum,
        angular_momentum,
    }
}

/// Constants of Sundman's strip for bodies of radius `chi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SundmanData {
    pub chi: f64,
    /// Total mass.
    pub gamma: f64,
    /// Energy constant `h`.
    pub h: f64,
    /// `Kc = -2 Gamma h / (m1 m2 m3)`.
    pub kc: f64,
    /// Half-height of the time strip on which all `1/r_ij` stay analytic.
    pub b_chi: f64,
    /// Bound on `|1/r_ij|` over that strip, `7 / (4 chi)`.
    pub m_chi: f64,
}

pub fn sundman_data(sys: &ThreeBodySystem, chi: f64) -> Result<SundmanData> {
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(Error::domain(
            "sundman_data",
            format!("chi = {chi} must be positive"),
        ));
    }
    let m = sys.masses;
    let gamma = sys.total_mass();
    let h = first_integrals(sys).energy;
    let kc = -2.0 * gamma * h / (m[0] * m[1] * m[2]);
    let m_min = m.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SundmanData {
        chi,
        gamma,
        h,
        kc,
        b_chi: sundman_half_height(m_min, gamma, kc.abs(), chi),
        m_chi: 7.0 / (4.0 * chi),
    })
}

/// `B_chi = (1/14) 2 chi / sqrt((28/21) Gamma^2 / (m chi) + Gamma |Kc|)` with
/// `m` the smallest mass.
pub fn sundman_half_height(min_mass: f64, gamma: f64, kc_abs: f64, chi: f64) -> f64 {
    let radicand = 28.0 / 21.0 * gamma * gamma / (min_mass * chi) + gamma * kc_abs;
    2.0 * chi / (14.0 * radicand.sqrt())
}

/// `f, f', f''` of `f(t) = 1 / r_ij(t)` at `t = 0`, up to `order <= 2`.
pub fn rinv_taylor(sys: &ThreeBodySystem, pair: Pair, order: usize) -> Result<TaylorData> {
    if order > 2 {
        return Err(Error::InsufficientData(format!(
            "1/r derivatives are available up to order 2, {order} requested"
        )));
    }
    let (i, j) = (pair.i, pair.j);
    let d = sub(sys.positions[i], sys.positions[j]);
    let v = sub(sys.velocities[i], sys.velocities[j]);
    let r = norm(d);
    if !(r > 0.0) {
        return Err(Error::Singular(format!(
            "bodies {} and {} coincide",
            i + 1,
            j + 1
        )));
    }
    let r3 = r * r * r;
    let dv = dot(d, v);
    let mut out = vec![1.0 / r];
    if order >= 1 {
        out.push(-dv / r3);
    }
    if order >= 2 {
        let acc = accelerations(sys)?;
        let a = sub(acc[i], acc[j]);
        out.push(-(dot(v, v) + dot(d, a)) / r3 + 3.0 * dv * dv / (r3 * r * r));
    }
    TaylorData::new(out)
}

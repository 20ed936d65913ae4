//! Brute-force stationary scattering used to check the closed-form amplitudes.

use num_complex::Complex64;

/// Integrates `ψ'' = 2m(V - E)/ħ² ψ` across a barrier on `[0, d]` with
/// classical RK4, starting from a unit transmitted wave `e^{ikx}` at `x = d`
/// and decomposing the solution at `x = 0` into incident and reflected waves.
/// Returns `(t, r)` with the transmitted wave written as `t e^{ikx}`.
pub fn rk4_barrier(energy: f64, height: f64, width: f64, mass: f64, hbar: f64, steps: usize) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let k = (2.0 * mass * energy).sqrt() / hbar;
    let c = 2.0 * mass * (height - energy) / (hbar * hbar);
    let f = |y: [Complex64; 2]| [y[1], y[0] * c];
    let mut y = [Complex64::from_polar(1.0, k * width), i * k * Complex64::from_polar(1.0, k * width)];
    let h = -width / steps as f64;
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f([y[0] + k1[0] * (h / 2.0), y[1] + k1[1] * (h / 2.0)]);
        let k3 = f([y[0] + k2[0] * (h / 2.0), y[1] + k2[1] * (h / 2.0)]);
        let k4 = f([y[0] + k3[0] * h, y[1] + k3[1] * h]);
        for n in 0..2 {
            y[n] += (k1[n] + k2[n] * 2.0 + k3[n] * 2.0 + k4[n]) * (h / 6.0);
        }
    }
    let incident = (y[0] + y[1] / (i * k)) / 2.0;
    let reflected = (y[0] - y[1] / (i * k)) / 2.0;
    (1.0 / incident, reflected / incident)
}

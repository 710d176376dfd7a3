//! Central-difference helpers for fields without closed-form derivatives.

/// Step sizes for central differences, scaled by (1 + |v|) of the perturbed
/// variable. First-order stencils balance truncation against rounding near
/// eps^(1/3); second-order stencils need a larger step near eps^(1/4).
#[derive(Debug, Clone, Copy)]
pub struct FdSteps {
    pub first: f64,
    pub second: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self {
            first: 1e-5,
            second: 2e-4,
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn step_first(steps: FdSteps, v: &[f64]) -> f64 {
    steps.first * (1.0 + norm(v))
}

pub fn step_second(steps: FdSteps, v: &[f64]) -> f64 {
    steps.second * (1.0 + norm(v))
}

/// d/dv_i of f at v.
pub fn central1(f: &dyn Fn(&[f64]) -> f64, v: &[f64], i: usize, h: f64) -> f64 {
    let mut vp = v.to_vec();
    let mut vm = v.to_vec();
    vp[i] += h;
    vm[i] -= h;
    (f(&vp) - f(&vm)) / (2.0 * h)
}

/// d^2/dv_i^2 of f at v.
pub fn central2_pure(f: &dyn Fn(&[f64]) -> f64, v: &[f64], i: usize, h: f64) -> f64 {
    let mut vp = v.to_vec();
    let mut vm = v.to_vec();
    vp[i] += h;
    vm[i] -= h;
    (f(&vp) - 2.0 * f(v) + f(&vm)) / (h * h)
}

/// d^2/(dv_i dv_j) of f at v, i != j.
pub fn central2_mixed(f: &dyn Fn(&[f64]) -> f64, v: &[f64], i: usize, j: usize, h: f64) -> f64 {
    let mut vpp = v.to_vec();
    let mut vpm = v.to_vec();
    let mut vmp = v.to_vec();
    let mut vmm = v.to_vec();
    vpp[i] += h;
    vpp[j] += h;
    vpm[i] += h;
    vpm[j] -= h;
    vmp[i] -= h;
    vmp[j] += h;
    vmm[i] -= h;
    vmm[j] -= h;
    (f(&vpp) - f(&vpm) - f(&vmp) + f(&vmm)) / (4.0 * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_derivatives_are_sharp() {
        let f = |v: &[f64]| 2.0 * v[0] * v[0] + 3.0 * v[0] * v[1] - v[1] * v[1];
        let v = [0.7, -1.1];
        let steps = FdSteps::default();
        let h1 = step_first(steps, &v);
        let h2 = step_second(steps, &v);
        assert!((central1(&f, &v, 0, h1) - (4.0 * v[0] + 3.0 * v[1])).abs() < 1e-9);
        assert!((central2_pure(&f, &v, 0, h2) - 4.0).abs() < 1e-6);
        assert!((central2_mixed(&f, &v, 0, 1, h2) - 3.0).abs() < 1e-6);
    }
}

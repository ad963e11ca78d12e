//! Pohožaev bookkeeping for computed radial solutions.
//!
//! For `Δ²u = λh(x, u)` on a domain `D ⊂ R^4` and any point `y`,
//!
//! `4∫_D λH + ∫_D ⟨x−y, ∇_x λH⟩ = ∫_{∂D} λH⟨x−y, n⟩ + ∫_{∂D} b`,
//!
//! with `b = ½(Δu)²⟨x−y,n⟩ − 2u_nΔu − (Δu)_n⟨x−y,∇u⟩ − u_n⟨x−y,∇Δu⟩ + ⟨∇Δu,∇u⟩⟨x−y,n⟩`.
//! Every term is reported separately so that cancellations can be inspected.
//! Points `y` are taken on the first coordinate axis; all integrands are then
//! axisymmetric and reduce to integrals over a radius and one polar angle.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, simpson_nonuniform, GaussLegendre};
use crate::radial::RadialSolution;
use crate::source::RadialSource;

/// Largest solver residual accepted as converged input.
pub const CONVERGED_RESIDUAL: f64 = 1e-8;
const ANGLE_POINTS: usize = 32;
const RADIAL_CELLS: usize = 24;
const RADIAL_POINTS: usize = 16;

/// Boundary integrals of one boundary component.
#[derive(Debug, Clone, Copy, Default, Serialize, PartialEq)]
pub struct BoundaryTerms {
    /// `∫ λH ⟨x−y, n⟩`.
    pub h_term: f64,
    /// `∫ ½(Δu)² ⟨x−y, n⟩`.
    pub half_lap_sq: f64,
    /// `∫ −2 u_n Δu`.
    pub minus2_un_lap: f64,
    /// `∫ −(Δu)_n ⟨x−y, ∇u⟩`.
    pub lapn_xgradu: f64,
    /// `∫ −u_n ⟨x−y, ∇Δu⟩`.
    pub un_xgradlap: f64,
    /// `∫ ⟨∇Δu, ∇u⟩⟨x−y, n⟩`.
    pub gradlap_gradu_xn: f64,
}

impl BoundaryTerms {
    pub fn b_total(&self) -> f64 {
        pairwise_sum(&[
            self.half_lap_sq,
            self.minus2_un_lap,
            self.lapn_xgradu,
            self.un_xgradlap,
            self.gradlap_gradu_xn,
        ])
    }

    pub fn total(&self) -> f64 {
        self.h_term + self.b_total()
    }

    fn magnitudes(&self) -> [f64; 6] {
        [
            self.h_term.abs(),
            self.half_lap_sq.abs(),
            self.minus2_un_lap.abs(),
            self.lapn_xgradu.abs(),
            self.un_xgradlap.abs(),
            self.gradlap_gradu_xn.abs(),
        ]
    }

    fn add_weighted(&mut self, w: f64, o: &BoundaryTerms) {
        self.h_term += w * o.h_term;
        self.half_lap_sq += w * o.half_lap_sq;
        self.minus2_un_lap += w * o.minus2_un_lap;
        self.lapn_xgradu += w * o.lapn_xgradu;
        self.un_xgradlap += w * o.un_xgradlap;
        self.gradlap_gradu_xn += w * o.gradlap_gradu_xn;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryComponent {
    pub name: &'static str,
    pub terms: BoundaryTerms,
}

#[derive(Debug, Clone, Serialize)]
pub struct PohozaevReport {
    /// First coordinate of `y`; the others vanish.
    pub y: f64,
    /// `4∫ λH`.
    pub volume_h_term: f64,
    /// `∫ ⟨x−y, ∇_x λH⟩`.
    pub volume_grad_h_term: f64,
    pub boundary: Vec<BoundaryComponent>,
    /// Offset along the outer normal that defines `y` on boundary-centred balls.
    pub selection_rho: Option<f64>,
    /// Left side minus right side.
    pub residual: f64,
    /// `|residual|` over the largest individual term.
    pub relative_residual: f64,
}

impl PohozaevReport {
    pub fn lhs(&self) -> f64 {
        self.volume_h_term + self.volume_grad_h_term
    }

    pub fn rhs(&self) -> f64 {
        pairwise_sum(&self.boundary.iter().map(|c| c.terms.total()).collect::<Vec<_>>())
    }

    pub fn component(&self, name: &str) -> Option<&BoundaryTerms> {
        self.boundary.iter().find(|c| c.name == name).map(|c| &c.terms)
    }

    fn finish(mut self) -> Self {
        let lhs = self.lhs();
        let rhs = self.rhs();
        self.residual = lhs - rhs;
        let mut largest = self.volume_h_term.abs().max(self.volume_grad_h_term.abs());
        for c in &self.boundary {
            for m in c.terms.magnitudes() {
                largest = largest.max(m);
            }
        }
        self.relative_residual = if largest > 0.0 {
            self.residual.abs() / largest
        } else {
            0.0
        };
        self
    }
}

fn check_input(sol: &RadialSolution) -> Result<()> {
    if !(sol.residual_norm <= CONVERGED_RESIDUAL) {
        return Err(Error::Precondition(format!(
            "solution residual {:e} exceeds {CONVERGED_RESIDUAL:e}",
            sol.residual_norm
        )));
    }
    Ok(())
}

/// Local fields of a radial solution at a point of the meridian plane.
struct PointData {
    x: [f64; 2],
    xhat: [f64; 2],
    du: f64,
    lap: f64,
    dlap: f64,
    big_h: f64,
    big_h_r: f64,
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn point_data(sol: &RadialSolution, source: &dyn RadialSource, x: [f64; 2]) -> Result<PointData> {
    let r = x[0].hypot(x[1]).min(1.0);
    let xhat = if r > 0.0 { [x[0] / r, x[1] / r] } else { [1.0, 0.0] };
    let [u, du, lap, dlap] = sol.eval(r);
    Ok(PointData {
        x,
        xhat,
        du,
        lap,
        dlap,
        big_h: sol.lambda * source.big_h(r, u)?,
        big_h_r: sol.lambda * source.big_h_r(r, u)?,
    })
}

fn boundary_density(p: &PointData, n: [f64; 2], y: f64) -> BoundaryTerms {
    let xy = [p.x[0] - y, p.x[1]];
    let xy_n = dot(xy, n);
    let xy_hat = dot(xy, p.xhat);
    let hat_n = dot(p.xhat, n);
    let un = p.du * hat_n;
    let lapn = p.dlap * hat_n;
    BoundaryTerms {
        h_term: p.big_h * xy_n,
        half_lap_sq: 0.5 * p.lap * p.lap * xy_n,
        minus2_un_lap: -2.0 * un * p.lap,
        lapn_xgradu: -lapn * p.du * xy_hat,
        un_xgradlap: -un * p.dlap * xy_hat,
        gradlap_gradu_xn: p.dlap * p.du * xy_n,
    }
}

/// `∫ f dσ` over the part of a 3-sphere of radius `radius` with polar angle in `[a, b]`.
fn sphere_band<F: FnMut(f64) -> Result<BoundaryTerms>>(
    gl: &GaussLegendre,
    radius: f64,
    a: f64,
    b: f64,
    mut f: F,
) -> Result<BoundaryTerms> {
    let area = 4.0 * PI * radius.powi(3);
    let mut total = BoundaryTerms::default();
    for (node, w) in gl.nodes_weights(a, b) {
        let t = f(node)?;
        total.add_weighted(w * area * node.sin().powi(2), &t);
    }
    Ok(total)
}

/// Identity on the whole ball with `y` at distance `y_offset` from the origin.
pub fn pohozaev_ball(sol: &RadialSolution, source: &dyn RadialSource, y_offset: f64) -> Result<PohozaevReport> {
    check_input(sol)?;
    if !y_offset.is_finite() {
        return Err(Error::InvalidParameter("y offset must be finite".into()));
    }
    let s = sol.grid.squares();
    let mut vh = Vec::with_capacity(s.len());
    let mut vg = Vec::with_capacity(s.len());
    for ((&r, &u), &si) in sol.grid.nodes.iter().zip(&sol.u).zip(&s) {
        vh.push(0.5 * si * sol.lambda * source.big_h(r, u)?);
        vg.push(0.5 * si * r * sol.lambda * source.big_h_r(r, u)?);
    }
    let gl = GaussLegendre::new(ANGLE_POINTS);
    // angular moments ∫(1, cos φ) dσ over S³; the radial part of ⟨x−y, ∇_x H⟩ is |x| − y cos φ
    let mut m0 = 0.0;
    let mut m1 = 0.0;
    for (phi, w) in gl.nodes_weights(0.0, PI) {
        let dens = 4.0 * PI * phi.sin().powi(2) * w;
        m0 += dens;
        m1 += dens * phi.cos();
    }
    let volume_h_term = 4.0 * m0 * simpson_nonuniform(&s, &vh);
    let volume_grad_h_term = m0 * simpson_nonuniform(&s, &vg) - y_offset * m1 * {
        let vg0: Vec<f64> = vg.iter().zip(&sol.grid.nodes).map(|(v, &r)| if r > 0.0 { v / r } else { 0.0 }).collect();
        simpson_nonuniform(&s, &vg0)
    };
    let sphere = sphere_band(&gl, 1.0, 0.0, PI, |phi| {
        let x = [phi.cos(), phi.sin()];
        let p = point_data(sol, source, x)?;
        Ok(boundary_density(&p, x, y_offset))
    })?;
    Ok(PohozaevReport {
        y: y_offset,
        volume_h_term,
        volume_grad_h_term,
        boundary: vec![BoundaryComponent {
            name: "sphere",
            terms: sphere,
        }],
        selection_rho: None,
        residual: 0.0,
        relative_residual: 0.0,
    }
    .finish())
}

/// Placement of a sub-ball `B_ρ(x0)` with `x0 = d e1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SubBall {
    /// `d + ρ < 1`: the ball lies inside the domain.
    Interior,
    /// `d = 1`: the ball is centred on the boundary sphere.
    BoundaryCentred,
}

fn classify_sub_ball(d: f64, rho: f64) -> Result<SubBall> {
    if !(rho > 0.0 && d >= 0.0 && d.is_finite() && rho.is_finite()) {
        return Err(Error::Precondition(format!("invalid sub-ball centre {d} radius {rho}")));
    }
    if (d - 1.0).abs() <= 1e-12 {
        if rho >= 2.0 {
            return Err(Error::Precondition(format!("boundary-centred radius {rho} must be below 2")));
        }
        return Ok(SubBall::BoundaryCentred);
    }
    if d + rho < 1.0 {
        return Ok(SubBall::Interior);
    }
    Err(Error::Precondition(format!(
        "sub-ball with centre {d} and radius {rho} is neither interior nor boundary-centred"
    )))
}

/// Identity on `Ω ∩ B_ρ(x0)`, `x0 = d e1`.
///
/// Interior balls use `y = x0`. For boundary-centred balls `y = x0 + ρ_sel n(x0)`
/// with `ρ_sel` chosen so that `∫_{∂Ω∩B} (Δu)²⟨x−y, n⟩` vanishes.
pub fn pohozaev_annulus(
    sol: &RadialSolution,
    source: &dyn RadialSource,
    centre: f64,
    radius: f64,
) -> Result<PohozaevReport> {
    check_input(sol)?;
    let kind = classify_sub_ball(centre, radius)?;
    let gl = GaussLegendre::new(ANGLE_POINTS);
    let cap_end = match kind {
        SubBall::Interior => 0.0,
        SubBall::BoundaryCentred => (1.0 - 0.5 * radius * radius).clamp(-1.0, 1.0).acos(),
    };
    let phi_min = |t: f64| match kind {
        SubBall::Interior => 0.0,
        SubBall::BoundaryCentred => (-0.5 * t).clamp(-1.0, 1.0).acos(),
    };

    let (y, selection_rho) = match kind {
        SubBall::Interior => (centre, None),
        SubBall::BoundaryCentred => {
            let mut num = 0.0;
            let mut den = 0.0;
            for (psi, w) in gl.nodes_weights(0.0, cap_end) {
                let x = [psi.cos(), psi.sin()];
                let lap = sol.eval(1.0)[2];
                let dens = 4.0 * PI * psi.sin().powi(2) * w * lap * lap;
                num += dens * dot([x[0] - centre, x[1]], x);
                den += dens * x[0];
            }
            if den == 0.0 {
                return Err(Error::Precondition("selection rule is degenerate: Δu vanishes on the cap".into()));
            }
            let rs = num / den;
            if rs.abs() > 2.0 * radius {
                return Err(Error::Inconsistent(format!("selected offset {rs:e} exceeds twice the radius")));
            }
            (centre + rs, Some(rs))
        }
    };

    // volume terms: x = x0 + t(cos φ, sin φ)
    let mut vol_h = Vec::new();
    let mut vol_g = Vec::new();
    let gl_t = GaussLegendre::new(RADIAL_POINTS);
    for c in 0..RADIAL_CELLS {
        let t0 = radius * c as f64 / RADIAL_CELLS as f64;
        let t1 = radius * (c + 1) as f64 / RADIAL_CELLS as f64;
        for (t, wt) in gl_t.nodes_weights(t0, t1) {
            let mut ah = 0.0;
            let mut ag = 0.0;
            for (phi, wp) in gl.nodes_weights(phi_min(t), PI) {
                let x = [centre + t * phi.cos(), t * phi.sin()];
                let p = point_data(sol, source, x)?;
                let dens = 4.0 * PI * phi.sin().powi(2) * wp;
                ah += dens * p.big_h;
                ag += dens * p.big_h_r * dot([x[0] - y, x[1]], p.xhat);
            }
            vol_h.push(wt * t.powi(3) * ah);
            vol_g.push(wt * t.powi(3) * ag);
        }
    }

    let inner = sphere_band(&gl, radius, phi_min(radius), PI, |phi| {
        let n = [phi.cos(), phi.sin()];
        let x = [centre + radius * n[0], radius * n[1]];
        let p = point_data(sol, source, x)?;
        Ok(boundary_density(&p, n, y))
    })?;
    let mut boundary = vec![BoundaryComponent {
        name: "inner_sphere",
        terms: inner,
    }];
    if kind == SubBall::BoundaryCentred {
        let cap = sphere_band(&gl, 1.0, 0.0, cap_end, |psi| {
            let x = [psi.cos(), psi.sin()];
            let p = point_data(sol, source, x)?;
            Ok(boundary_density(&p, x, y))
        })?;
        boundary.push(BoundaryComponent {
            name: "domain_cap",
            terms: cap,
        });
    }
    Ok(PohozaevReport {
        y,
        volume_h_term: 4.0 * pairwise_sum(&vol_h),
        volume_grad_h_term: pairwise_sum(&vol_g),
        boundary,
        selection_rho,
        residual: 0.0,
        relative_residual: 0.0,
    }
    .finish())
}

/// Observed order `log2(|res_coarse| / |res_fine|)` between two resolutions.
pub fn residual_order(coarse: &PohozaevReport, fine: &PohozaevReport) -> f64 {
    (coarse.residual.abs() / fine.residual.abs()).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::radial::{solve, BoundaryCondition, SolverConfig};
    use crate::source::Forcing;

    fn plate(bc: BoundaryCondition, n: usize) -> (RadialSolution, Forcing) {
        let src = Forcing::constant(192.0);
        let sol = solve(&src, 1.0, bc, &RadialGrid::uniform(n).unwrap(), &SolverConfig::default(), None).unwrap();
        (sol, src)
    }

    fn manufactured(grid: &RadialGrid) -> (RadialSolution, Forcing) {
        let src = Forcing::new(vec![576.0, 0.0, -1152.0]).unwrap();
        let sol = solve(&src, 1.0, BoundaryCondition::Dirichlet, grid, &SolverConfig::default(), None).unwrap();
        (sol, src)
    }

    #[test]
    fn clamped_plate_balance() {
        let (sol, src) = plate(BoundaryCondition::Dirichlet, 513);
        let rep = pohozaev_ball(&sol, &src, 0.0).unwrap();
        let target = 64.0 * PI * PI;
        assert!((rep.lhs() / target - 1.0).abs() < 1e-8, "{}", rep.lhs());
        let b = rep.component("sphere").unwrap();
        assert!((b.half_lap_sq / target - 1.0).abs() < 1e-8);
        assert!(b.minus2_un_lap.abs() < 1e-8 && b.lapn_xgradu.abs() < 1e-8);
        assert!(rep.relative_residual < 1e-6);
    }

    #[test]
    fn hinged_plate_balance() {
        let (sol, src) = plate(BoundaryCondition::Navier, 513);
        let rep = pohozaev_ball(&sol, &src, 0.0).unwrap();
        let target = 192.0 * PI * PI;
        assert!((rep.lhs() / target - 1.0).abs() < 1e-8, "{}", rep.lhs());
        assert!(rep.component("sphere").unwrap().half_lap_sq.abs() < 1e-8);
        assert!(rep.relative_residual < 1e-6);
    }

    #[test]
    fn y_does_not_matter_on_the_ball() {
        let (sol, src) = manufactured(&RadialGrid::uniform(257).unwrap());
        let a = pohozaev_ball(&sol, &src, 0.0).unwrap();
        for y in [0.3, -0.7, 2.0] {
            let b = pohozaev_ball(&sol, &src, y).unwrap();
            assert!((a.residual - b.residual).abs() < 1e-9 * a.lhs().abs(), "y = {y}");
        }
    }

    #[test]
    fn residual_is_second_order() {
        let g = RadialGrid::uniform(129).unwrap();
        let (c, src) = manufactured(&g);
        let (f, _) = manufactured(&g.refined());
        let rc = pohozaev_ball(&c, &src, 0.0).unwrap();
        let rf = pohozaev_ball(&f, &src, 0.0).unwrap();
        let order = residual_order(&rc, &rf);
        assert!((1.7..=2.3).contains(&order), "order {order}");
    }

    #[test]
    fn interior_sub_ball() {
        let (sol, src) = manufactured(&RadialGrid::uniform(1025).unwrap());
        for (d, rho) in [(0.3, 0.4), (0.0, 0.5), (0.5, 0.2)] {
            let rep = pohozaev_annulus(&sol, &src, d, rho).unwrap();
            assert!(rep.relative_residual < 1e-5, "{d} {rho}: {}", rep.relative_residual);
            assert!(rep.selection_rho.is_none());
        }
    }

    #[test]
    fn boundary_centred_sub_ball() {
        let (sol, src) = plate(BoundaryCondition::Dirichlet, 1025);
        for rho in [0.3, 0.5, 1.0] {
            let rep = pohozaev_annulus(&sol, &src, 1.0, rho).unwrap();
            let cap = rep.component("domain_cap").unwrap();
            let sel = rep.selection_rho.unwrap();
            assert!(sel.abs() <= 2.0 * rho);
            assert!(cap.half_lap_sq.abs() < 1e-10, "{}", cap.half_lap_sq);
            assert!(cap.minus2_un_lap.abs() < 1e-8 && cap.un_xgradlap.abs() < 1e-8);
            assert!(rep.relative_residual < 1e-5, "{rho}: {}", rep.relative_residual);
        }
    }

    #[test]
    fn rejects_bad_geometry_and_unconverged_input() {
        let (sol, src) = plate(BoundaryCondition::Dirichlet, 129);
        assert!(pohozaev_annulus(&sol, &src, 0.5, 0.6).is_err());
        assert!(pohozaev_annulus(&sol, &src, 1.0, 2.5).is_err());
        assert!(pohozaev_annulus(&sol, &src, 0.2, 0.0).is_err());
        let bad = RadialSolution { residual_norm: 1e-3, ..sol };
        assert!(pohozaev_ball(&bad, &src, 0.0).is_err());
    }
}

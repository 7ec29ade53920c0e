use crate::error::{Error, Result};
use crate::generative::{SourceLabel, TwoSuspectParams};
use crate::stats::{Kde1D, RngStream};

/// Opening angle between the two anchor directions in the planar toy.
const OPENING_ANGLE: f64 = std::f64::consts::FRAC_PI_3;

/// Scalar projection of `v` onto the direction of `onto`.
pub fn scalar_projection(v: [f64; 2], onto: [f64; 2]) -> Result<f64> {
    let norm = (onto[0] * onto[0] + onto[1] * onto[1]).sqrt();
    if !(norm > 0.0) {
        return Err(Error::Degenerate("cannot project onto a zero-length anchor".into()));
    }
    Ok((v[0] * onto[0] + v[1] * onto[1]) / norm)
}

/// Projections of both pseudo-trace clouds and of the trace onto one anchor.
#[derive(Debug, Clone)]
pub struct ProjectionPanel {
    pub anchor: [f64; 2],
    pub anchored_on: SourceLabel,
    /// Projections of pseudo-traces from source A.
    pub a_cloud: Vec<f64>,
    /// Projections of pseudo-traces from source B.
    pub b_cloud: Vec<f64>,
    /// Projection of the observed trace.
    pub trace: f64,
    /// The source whose projected density is higher at the trace projection.
    pub favors: SourceLabel,
}

/// The planar projection demonstration: both source clouds, the trace, and
/// the two projection panels.
#[derive(Debug, Clone)]
pub struct ProjectionDemo {
    pub e_a: [f64; 2],
    pub e_b: [f64; 2],
    pub e_u: [f64; 2],
    pub onto_a: ProjectionPanel,
    pub onto_b: ProjectionPanel,
}

/// Build the planar toy behind the projection argument.
///
/// Anchors sit at a fixed 60-degree opening with lengths `mu_a` and `mu_b`;
/// pseudo-traces from each source scatter isotropically around the anchor
/// tips with variances `var_a` and `var_b`. The observed trace lies between
/// the sources, pulled toward the origin (`(e_a + e_b) / 3` plus isotropic
/// `var_u` jitter), the placement for which the projections swap neighbours.
/// Each panel projects everything onto one anchor and reads off which cloud's
/// kernel density is higher at the trace projection.
pub fn projection_demo(
    p: &TwoSuspectParams,
    n_pseudo: usize,
    seed: u64,
) -> Result<ProjectionDemo> {
    if n_pseudo < 100 {
        return Err(Error::Config(format!(
            "projection demo needs n_pseudo >= 100, got {n_pseudo}"
        )));
    }
    if !(p.mu_a > 0.0 && p.mu_b > 0.0) {
        return Err(Error::Degenerate(
            "anchor lengths mu_a and mu_b must be positive in the planar toy".into(),
        ));
    }
    let half = OPENING_ANGLE / 2.0;
    let dir_a = [half.cos(), half.sin()];
    let dir_b = [half.cos(), -half.sin()];
    let e_a = [p.mu_a * dir_a[0], p.mu_a * dir_a[1]];
    let e_b = [p.mu_b * dir_b[0], p.mu_b * dir_b[1]];

    let cloud = |mean: [f64; 2], var: f64, stream_id: u64| -> Vec<[f64; 2]> {
        let mut s = RngStream::new(seed, stream_id);
        let sd = var.sqrt();
        (0..n_pseudo)
            .map(|_| [mean[0] + sd * s.standard_normal(), mean[1] + sd * s.standard_normal()])
            .collect()
    };
    let a_cloud = cloud(e_a, p.var_a, 0);
    let b_cloud = cloud(e_b, p.var_b, 1);
    let mut s_u = RngStream::new(seed, 2);
    let sd_u = p.var_u.sqrt();
    let e_u = [
        (e_a[0] + e_b[0]) / 3.0 + sd_u * s_u.standard_normal(),
        (e_a[1] + e_b[1]) / 3.0 + sd_u * s_u.standard_normal(),
    ];

    let panel = |anchor: [f64; 2], anchored_on: SourceLabel| -> Result<ProjectionPanel> {
        let project =
            |cloud: &[[f64; 2]]| cloud.iter().map(|v| scalar_projection(*v, anchor)).collect();
        let a_proj: Result<Vec<f64>> = project(&a_cloud);
        let b_proj: Result<Vec<f64>> = project(&b_cloud);
        let (a_proj, b_proj) = (a_proj?, b_proj?);
        let trace = scalar_projection(e_u, anchor)?;
        let a_density = Kde1D::build(&a_proj)?.log_pdf(trace);
        let b_density = Kde1D::build(&b_proj)?.log_pdf(trace);
        Ok(ProjectionPanel {
            anchor,
            anchored_on,
            a_cloud: a_proj,
            b_cloud: b_proj,
            trace,
            favors: if a_density >= b_density { SourceLabel::A } else { SourceLabel::B },
        })
    };

    Ok(ProjectionDemo {
        e_a,
        e_b,
        e_u,
        onto_a: panel(e_a, SourceLabel::A)?,
        onto_b: panel(e_b, SourceLabel::B)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_of_anchor_onto_itself_is_its_length() {
        let v = [3.0, 4.0];
        assert!((scalar_projection(v, v).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn projection_is_linear() {
        let onto = [2.0, -1.0];
        let v = [0.7, 1.9];
        for c in [-3.0, 0.5, 2.0] {
            let scaled = scalar_projection([c * v[0], c * v[1]], onto).unwrap();
            assert!((scaled - c * scalar_projection(v, onto).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_anchor_is_degenerate() {
        assert!(matches!(
            scalar_projection([1.0, 1.0], [0.0, 0.0]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn demo_requires_enough_pseudo_traces() {
        let p = TwoSuspectParams::new(4.0, 0.25, 4.0, 0.25, 0.04).unwrap();
        assert!(matches!(projection_demo(&p, 10, 1), Err(Error::Config(_))));
    }

    #[test]
    fn symmetric_configuration_flips_the_support() {
        // equal anchor lengths put the trace projection exactly on the other
        // cloud's projected mean
        let p = TwoSuspectParams::new(4.0, 0.25, 4.0, 0.25, 0.04).unwrap();
        let demo = projection_demo(&p, 400, 20).unwrap();
        assert_eq!(demo.onto_a.favors, SourceLabel::B);
        assert_eq!(demo.onto_b.favors, SourceLabel::A);
    }
}

//! Classical closed 2-forms with analytic smearing, their pole-indexed potentials, gauge
//! families, and the phase-valued cochain and connection built from them.

mod cochain;
mod gauge;
mod integrals;
mod model;

pub use cochain::{em_cochain, gauge_lift, pot_connection, EmCochain, LiftedGauge, PotConnection};
pub use gauge::{gauge_shift, GaugeFunctionFamily, GaugeShift, ScalarFunction};
pub use integrals::{
    boundary_independence_check, chain_surface_integral, closedness_residual, cone_check,
    covariance_check, line_integral, potential, primitivity_residual, stokes_check,
    surface_integral, surface_integral_with, Curve, QuadratureConfig,
};
pub use model::{smeared_field, Bivector, FieldModel, SmearedField, ZERO_BIVECTOR};

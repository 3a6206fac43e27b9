use std::sync::Arc;

use causal_loops::emfield::{
    boundary_independence_check, closedness_residual, cone_check, covariance_check, em_cochain,
    gauge_shift, pot_connection, primitivity_residual, stokes_check, Curve, FieldModel,
    GaugeFunctionFamily, QuadratureConfig, ScalarFunction,
};
use causal_loops::holonomy::{
    apply_gauge, connection_from_rep, equivalence_defect, frame_change_gauge, frame_transport,
    rep_from_cochain, Connection, GaugeFamily, LoopRepresentation,
};
use causal_loops::loopgroup::PathFrameSystem;
use causal_loops::simplex::{AffineSimplex, Chain, TestFunctionTag};
use rand::Rng;

use super::{model_tolerance, params, Ctx, Measured};
use crate::report::Record;
use crate::sample::{poincare, segment, triangle, vector, Rng64};

/// One record per model and tag at the finest order; `f` gets the model, tag and config.
fn per_model(
    ctx: &Ctx,
    rng: &mut Rng64,
    tolerance: impl Fn(&FieldModel) -> f64,
    mut f: impl FnMut(&FieldModel, &TestFunctionTag, &QuadratureConfig, &mut Rng64) -> Measured,
) -> Vec<Record> {
    let mut out = Vec::new();
    for (ml, model) in ctx.models() {
        for (tl, tag) in ctx.tags() {
            let p = params! {"model" => ml.clone(), "tag" => tl, "order" => ctx.order()};
            out.push(ctx.record(p, tolerance(model), || {
                f(model, tag, &QuadratureConfig::new(ctx.order())?, rng)
            }));
        }
    }
    out
}

/// Maximum of `residual(rng)` over the configured number of samples.
fn worst_of(
    n: usize,
    rng: &mut Rng64,
    mut residual: impl FnMut(&mut Rng64) -> causal_loops::Result<f64>,
) -> Measured {
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        worst = worst.max(residual(rng)?);
    }
    Ok((n, worst))
}

pub fn stokes(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    let mut out = Vec::new();
    for &order in &ctx.cfg.quadrature_orders {
        for (ml, model) in ctx.models() {
            for (tl, tag) in ctx.tags() {
                let p = params! {"model" => ml.clone(), "tag" => tl, "order" => order};
                out.push(ctx.record(p, model_tolerance(model), || {
                    let cfg = QuadratureConfig::new(order)?;
                    worst_of(ctx.samples(), rng, |rng| {
                        let c = triangle(rng, ctx.scale(), tag);
                        stokes_check(model, tag, &vector(rng, ctx.scale()), &c, &cfg)
                    })
                }));
            }
        }
    }
    out
}

pub fn cone(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_model(ctx, rng, model_tolerance, |model, tag, cfg, rng| {
        worst_of(ctx.samples(), rng, |rng| {
            let s = segment(rng, ctx.scale(), tag);
            cone_check(model, tag, &vector(rng, ctx.scale()), &s, cfg)
        })
    })
}

/// Central differences with step 1e-4.
const STEP: f64 = 1e-4;

pub fn primitivity(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_model(
        ctx,
        rng,
        |_| 1e-6,
        |model, tag, cfg, rng| {
            worst_of(ctx.samples(), rng, |rng| {
                let (z, y) = (vector(rng, ctx.scale()), vector(rng, ctx.scale()));
                primitivity_residual(model, tag, &z, &y, cfg, STEP)
            })
        },
    )
}

pub fn closedness(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_model(
        ctx,
        rng,
        |_| 1e-6,
        |model, tag, _, rng| {
            worst_of(ctx.samples(), rng, |rng| {
                closedness_residual(model, tag, &vector(rng, ctx.scale()), STEP)
            })
        },
    )
}

pub fn covariance(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    let p = ctx.cfg.poincare;
    per_model(
        ctx,
        rng,
        |_| 1e-8,
        |model, tag, cfg, rng| {
            worst_of(p.count, rng, |rng| {
                let g = poincare(rng, p.max_rapidity, ctx.scale());
                let (z, y) = (vector(rng, ctx.scale()), vector(rng, ctx.scale()));
                covariance_check(model, tag, &z, &y, &g, cfg)
            })
        },
    )
}

fn gauge_family(rng: &mut Rng64) -> causal_loops::Result<GaugeFunctionFamily> {
    GaugeFunctionFamily::new(if rng.random_bool(0.5) {
        ScalarFunction::Polynomial {
            coeffs: (0..4).map(|_| rng.random_range(-1.0..1.0)).collect(),
        }
    } else {
        ScalarFunction::Sine {
            amplitude: rng.random_range(-1.0..1.0),
            frequency: rng.random_range(-2.0..2.0),
            phase: rng.random_range(0.0..std::f64::consts::TAU),
        }
    })
}

/// A polyline through 2 to 5 random points, closed if asked.
fn curve(rng: &mut Rng64, scale: f64, closed: bool) -> causal_loops::Result<Curve> {
    let mut pts: Vec<_> = (0..rng.random_range(2..=5))
        .map(|_| vector(rng, scale))
        .collect();
    if closed {
        pts.push(pts[0]);
    }
    Curve::polyline(pts)
}

pub fn gauge_closed(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_model(
        ctx,
        rng,
        |_| 1e-9,
        |model, tag, cfg, rng| {
            worst_of(ctx.samples(), rng, |rng| {
                let g = gauge_family(rng)?;
                let c = curve(rng, ctx.scale(), true)?;
                let s = gauge_shift(model, tag, &g, &vector(rng, ctx.scale()), &c, cfg)?;
                Ok((s.shifted - s.original).abs())
            })
        },
    )
}

pub fn gauge_open(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_model(
        ctx,
        rng,
        |_| 1e-9,
        |model, tag, cfg, rng| {
            worst_of(ctx.samples(), rng, |rng| {
                let g = gauge_family(rng)?;
                let c = curve(rng, ctx.scale(), false)?;
                Ok(gauge_shift(model, tag, &g, &vector(rng, ctx.scale()), &c, cfg)?.residual())
            })
        },
    )
}

/// Compares a triangle with the cone of its boundary, which has the same boundary.
pub fn boundary_independence(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_model(ctx, rng, model_tolerance, |model, tag, cfg, rng| {
        worst_of(ctx.samples(), rng, |rng| {
            let c = triangle(rng, ctx.scale(), tag);
            let coned = c.boundary()?.cone(&vector(rng, ctx.scale()));
            boundary_independence_check(model, &Chain::from_simplex(c), &coned, cfg)
        })
    })
}

fn pole(rng: &mut Rng64, scale: f64, tag: &TestFunctionTag) -> AffineSimplex {
    AffineSimplex::point(vector(rng, scale), tag.clone())
}

pub fn em_pot_equivalence(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_model(
        ctx,
        rng,
        |_| 1e-9,
        |model, tag, cfg, rng| {
            let lambda = Arc::new(rep_from_cochain(Arc::new(em_cochain(model, cfg)?)));
            let u_e = connection_from_rep(lambda, PathFrameSystem::Euclidean);
            let u_pot = pot_connection(model, cfg)?;
            worst_of(ctx.samples(), rng, |rng| {
                let (a, b) = (pole(rng, ctx.scale(), tag), segment(rng, ctx.scale(), tag));
                u_e.eval(&a, &b)?.distance(&u_pot.eval(&a, &b)?)
            })
        },
    )
}

/// For a detour frame `Q`: the frame-change gauge carries `u_E` to `u_Q`, and frame
/// transport intertwines `u_Q` with `u_E`.
pub fn em_frame_equivalence(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_model(
        ctx,
        rng,
        |_| 1e-9,
        |model, tag, cfg, rng| {
            let lambda: Arc<dyn LoopRepresentation> =
                Arc::new(rep_from_cochain(Arc::new(em_cochain(model, cfg)?)));
            worst_of(ctx.samples(), rng, |rng| {
                let q = PathFrameSystem::detour(vector(rng, 0.5 * ctx.scale()));
                let u_e: Arc<dyn Connection> = Arc::new(connection_from_rep(
                    lambda.clone(),
                    PathFrameSystem::Euclidean,
                ));
                let u_q: Arc<dyn Connection> =
                    Arc::new(connection_from_rep(lambda.clone(), q.clone()));
                let g: Arc<dyn GaugeFamily> = Arc::new(frame_change_gauge(
                    lambda.clone(),
                    PathFrameSystem::Euclidean,
                    q,
                ));
                let gauged = apply_gauge(u_e.clone(), g)?;
                let t = frame_transport(u_q.clone(), PathFrameSystem::Euclidean);
                let (a, b) = (pole(rng, ctx.scale(), tag), segment(rng, ctx.scale(), tag));
                let change = gauged.eval(&a, &b)?.distance(&u_q.eval(&a, &b)?)?;
                Ok(change.max(equivalence_defect(&t, u_q.as_ref(), u_e.as_ref(), &a, &b)?))
            })
        },
    )
}

/// Residual is the largest increase of the worst Stokes residual between consecutive
/// orders (ascending), over a fixed sample set. Uses the configured orders when there are at
/// least two, otherwise 4, 8, 16, 32.
pub fn quadrature_convergence(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    let mut orders = ctx.cfg.quadrature_orders.clone();
    orders.sort_unstable();
    orders.dedup();
    if orders.len() < 2 {
        orders = vec![4, 8, 16, 32];
    }
    let mut out = Vec::new();
    for (ml, model) in ctx.models() {
        for (tl, tag) in ctx.tags() {
            let p = params! {"model" => ml.clone(), "tag" => tl, "orders" => orders.clone()};
            out.push(ctx.record(p, 1e-12, || {
                let cases: Vec<_> = (0..ctx.samples())
                    .map(|_| (triangle(rng, ctx.scale(), tag), vector(rng, ctx.scale())))
                    .collect();
                let mut residuals = Vec::new();
                for &order in &orders {
                    let cfg = QuadratureConfig::new(order)?;
                    let mut worst: f64 = 0.0;
                    for (c, z) in &cases {
                        worst = worst.max(stokes_check(model, tag, z, c, &cfg)?);
                    }
                    residuals.push(worst);
                }
                let rise = residuals
                    .windows(2)
                    .map(|w| (w[1] - w[0]).max(0.0))
                    .fold(0.0, f64::max);
                Ok((cases.len(), rise))
            }));
        }
    }
    out
}

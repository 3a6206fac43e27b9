use std::sync::Arc;

use causal_loops::emfield::{em_cochain, QuadratureConfig};
use causal_loops::geometry::{DoubleCone, FourVector, PoincareElement, Tri};
use causal_loops::holonomy::{
    apply_gauge, cochain_from_rep, connection_axiom_defect, connection_from_rep,
    frame_change_gauge, mock_lattice_cochain, rep_from_cochain, verify_cochain, Cochain,
    CochainScenario, Connection, GaugeFamily, LoopRepresentation, MockLatticeCochain,
};
use causal_loops::loopgroup::PathFrameSystem;
use causal_loops::simplex::{AffineSimplex, TestFunctionTag};
use rand::Rng;
use serde_json::Value;

use super::{params, Ctx, Measured};
use crate::report::Record;
use crate::sample::{closed_polyline, poincare, segment, simplex, triangle, vector, Rng64};

fn mock(ctx: &Ctx) -> causal_loops::Result<MockLatticeCochain> {
    let m = ctx.cfg.mock;
    mock_lattice_cochain(
        DoubleCone::new(FourVector::ZERO, m.radius)?,
        m.cell_size,
        m.qudit_dim,
    )
}

/// The mock cochain and one em cochain per model, each with its label.
fn cochains(ctx: &Ctx) -> Vec<(Value, causal_loops::Result<Arc<dyn Cochain>>)> {
    let mut out: Vec<(Value, causal_loops::Result<Arc<dyn Cochain>>)> = vec![(
        Value::from("mock"),
        mock(ctx).map(|m| Arc::new(m) as Arc<dyn Cochain>),
    )];
    for (label, model) in ctx.models() {
        let w = QuadratureConfig::new(ctx.order())
            .and_then(|cfg| em_cochain(model, &cfg))
            .map(|w| Arc::new(w) as Arc<dyn Cochain>);
        out.push((
            Value::from(format!("em:{}", label.as_str().unwrap_or_default())),
            w,
        ));
    }
    out
}

/// One record per cochain and tag.
fn per_cochain(
    ctx: &Ctx,
    rng: &mut Rng64,
    default_tolerance: f64,
    mut f: impl FnMut(&Arc<dyn Cochain>, &TestFunctionTag, &mut Rng64) -> Measured,
) -> Vec<Record> {
    let mut out = Vec::new();
    for (name, w) in cochains(ctx) {
        for (label, tag) in ctx.tags() {
            let p = params! {"cochain" => name.clone(), "tag" => label};
            out.push(ctx.record(p, default_tolerance, || {
                f(w.as_ref().map_err(Clone::clone)?, tag, rng)
            }));
        }
    }
    out
}

fn random_frames(rng: &mut Rng64, scale: f64) -> PathFrameSystem {
    if rng.random_bool(0.3) {
        PathFrameSystem::Euclidean
    } else {
        PathFrameSystem::detour(vector(rng, 0.5 * scale))
    }
}

/// Two small triangles on opposite sides of the region along x¹.
fn split_pair(
    rng: &mut Rng64,
    radius: f64,
    tag: &TestFunctionTag,
) -> (AffineSimplex, AffineSimplex) {
    let x = rng.random_range(0.3..0.9) * radius;
    let y = rng.random_range(0.3..0.9) * radius;
    (
        simplex(
            rng,
            2,
            FourVector::new(0.0, -x, 0.0, 0.0),
            0.05 * radius,
            tag,
        ),
        simplex(
            rng,
            2,
            FourVector::new(0.0, y, 0.0, 0.0),
            0.05 * radius,
            tag,
        ),
    )
}

pub fn cochain_axioms(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    let tol = ctx.cfg.tolerance(ctx.check, 1e-12);
    let mut out = Vec::new();
    for (name, w) in cochains(ctx) {
        for (label, tag) in ctx.tags() {
            let base = params! {"cochain" => name.clone(), "tag" => label};
            let result = w.as_ref().map_err(Clone::clone).and_then(|w| {
                let n = ctx.samples();
                let cell = ctx.cfg.mock.cell_size;
                let scenario = CochainScenario {
                    simplices: (0..n).map(|_| triangle(rng, ctx.scale(), tag)).collect(),
                    disjoint_pairs: (0..n)
                        .map(|_| split_pair(rng, ctx.cfg.mock.radius, tag))
                        .collect(),
                    group_elements: (0..ctx.cfg.poincare.count)
                        .map(|i| {
                            if i % 2 == 0 {
                                poincare(rng, ctx.cfg.poincare.max_rapidity, ctx.scale())
                            } else {
                                // Lattice translations, so the mock has covariance samples too.
                                let mut t = vector(rng, 0.5 * ctx.scale());
                                t.0[1] = cell * rng.random_range(-1..=1) as f64;
                                PoincareElement::translation(t)
                            }
                        })
                        .collect(),
                    tolerance: tol,
                };
                verify_cochain(w.as_ref(), &scenario)
            });
            match result {
                Ok(records) => {
                    for r in records {
                        let mut p = base.clone();
                        p.insert("property".into(), Value::from(r.check.clone()));
                        out.push(Record::measured(
                            ctx.check,
                            p,
                            r.samples,
                            r.max_violation,
                            tol,
                        ));
                    }
                }
                Err(e) => out.push(Record::failed(ctx.check, base, tol, e.to_string())),
            }
        }
    }
    out
}

pub fn round_trip_cochain(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_cochain(ctx, rng, 1e-12, |w, tag, rng| {
        let back = cochain_from_rep(Arc::new(rep_from_cochain(w.clone())));
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.samples() {
            let c = triangle(rng, ctx.scale(), tag);
            worst = worst.max(back.eval(&c)?.distance(&w.eval(&c)?)?);
        }
        Ok((ctx.samples(), worst))
    })
}

pub fn round_trip_representation(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_cochain(ctx, rng, 1e-12, |w, tag, rng| {
        let lambda: Arc<dyn LoopRepresentation> = Arc::new(rep_from_cochain(w.clone()));
        let back = rep_from_cochain(Arc::new(cochain_from_rep(lambda.clone())));
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.samples() {
            let k = rng.random_range(2..=5);
            let p = closed_polyline(rng, k, ctx.scale(), tag);
            worst = worst.max(back.eval_loop(&p)?.distance(&lambda.eval_loop(&p)?)?);
        }
        Ok((ctx.samples(), worst))
    })
}

pub fn loop_restoration(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    per_cochain(ctx, rng, 1e-12, |w, tag, rng| {
        let lambda: Arc<dyn LoopRepresentation> = Arc::new(rep_from_cochain(w.clone()));
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.samples() {
            let u = connection_from_rep(lambda.clone(), random_frames(rng, ctx.scale()));
            let k = rng.random_range(2..=5);
            let p = closed_polyline(rng, k, ctx.scale(), tag);
            worst = worst.max(
                u.eval_path(&p.start(), &p)?
                    .distance(&lambda.eval_loop(&p)?)?,
            );
        }
        Ok((ctx.samples(), worst))
    })
}

/// Runs `f(gauged, u_Q, pole, segments)` for random frame pairs `(P, Q)`, where `gauged` is
/// `u_P` transformed by the frame-change gauge.
fn frame_pairs(
    ctx: &Ctx,
    rng: &mut Rng64,
    f: impl Fn(
        &dyn Connection,
        &dyn Connection,
        &AffineSimplex,
        &[AffineSimplex],
    ) -> causal_loops::Result<f64>,
) -> Vec<Record> {
    per_cochain(ctx, rng, 1e-12, |w, tag, rng| {
        let lambda: Arc<dyn LoopRepresentation> = Arc::new(rep_from_cochain(w.clone()));
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.samples() {
            let (fp, fq) = (
                random_frames(rng, ctx.scale()),
                random_frames(rng, ctx.scale()),
            );
            let u_p: Arc<dyn Connection> =
                Arc::new(connection_from_rep(lambda.clone(), fp.clone()));
            let u_q = connection_from_rep(lambda.clone(), fq.clone());
            let g: Arc<dyn GaugeFamily> = Arc::new(frame_change_gauge(lambda.clone(), fp, fq));
            let gauged = apply_gauge(u_p, g)?;
            let pole = AffineSimplex::point(vector(rng, ctx.scale()), tag.clone());
            let segs: Vec<AffineSimplex> = (0..3).map(|_| segment(rng, ctx.scale(), tag)).collect();
            worst = worst.max(f(&gauged, &u_q, &pole, &segs)?);
        }
        Ok((ctx.samples(), worst))
    })
}

pub fn frame_change(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    frame_pairs(ctx, rng, |gauged, u_q, pole, segs| {
        let mut worst: f64 = 0.0;
        for b in segs {
            worst = worst.max(gauged.eval(pole, b)?.distance(&u_q.eval(pole, b)?)?);
        }
        Ok(worst)
    })
}

pub fn gauge_axioms(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    frame_pairs(ctx, rng, |gauged, _, pole, segs| {
        connection_axiom_defect(gauged, pole, segs)
    })
}

pub fn mock_causality(ctx: &Ctx, rng: &mut Rng64) -> Vec<Record> {
    ctx.tags()
        .map(|(label, tag)| {
            ctx.record(params! {"tag" => label}, 1e-14, || {
                let m = mock(ctx)?;
                let (mut pairs, mut worst): (usize, f64) = (0, 0.0);
                for _ in 0..ctx.samples() * 20 {
                    if pairs == ctx.samples() {
                        break;
                    }
                    let (l, r) = split_pair(rng, ctx.cfg.mock.radius, tag);
                    let (cl, cr) = (m.cells_touched(&l)?, m.cells_touched(&r)?);
                    if cl.iter().any(|j| cr.contains(j))
                        || l.support_ball().causally_disjoint(&r.support_ball()) != Tri::True
                    {
                        continue;
                    }
                    pairs += 1;
                    worst = worst.max(m.eval(&l)?.commutator_norm(&m.eval(&r)?)?);
                }
                if pairs == 0 {
                    return Err("no cell-disjoint, certified causally disjoint pairs found".into());
                }
                Ok((pairs, worst))
            })
        })
        .collect()
}

use std::fmt::Write as _;

use kgdamp::audit::Ratio;
use kgdamp::{AuditRadii, DampingSpec, Outcome, RunConfig};
use rayon::prelude::*;

use crate::commands::{simulate_into, Context, RunSummary};
use crate::error::{CliError, Result};
use crate::output::{cell, write_text};

/// Expands the sweep lists over the base configuration, in row-major order
/// (shape, λ₀, λ₁, radius, amplitude).
pub fn expand(ctx: &Context) -> Result<Vec<RunConfig>> {
    let s = &ctx.settings;
    let base = &s.run;
    let or_base = |v: &[f64], b: f64| if v.is_empty() { vec![b] } else { v.to_vec() };
    let shapes = if s.sweep.shapes.is_empty() {
        vec![base.damping.shape]
    } else {
        s.sweep.shapes.clone()
    };
    let lambda0 = or_base(&s.sweep.lambda0, base.damping.lambda0);
    let lambda1 = or_base(&s.sweep.lambda1, base.damping.lambda1);
    let radii = or_base(&s.sweep.radii, base.damping.radius);
    let amplitudes = or_base(&s.sweep.amplitudes, base.data.amplitude());
    let total = shapes.len() * lambda0.len() * lambda1.len() * radii.len() * amplitudes.len();
    if total > s.sweep.max_runs {
        return Err(CliError::Settings(format!(
            "sweep expands to {total} runs, above sweep.max_runs = {}",
            s.sweep.max_runs
        )));
    }
    let mut configs = Vec::with_capacity(total);
    for &shape in &shapes {
        for &l0 in &lambda0 {
            for &l1 in &lambda1 {
                for &radius in &radii {
                    for &a in &amplitudes {
                        let mut c = base.clone();
                        c.damping = DampingSpec::new(shape, l0, l1, radius);
                        c.data = base.data.with_amplitude(a);
                        if !s.explicit_radii {
                            c.radii = AuditRadii::from_radius(radius);
                        }
                        c.validate()?;
                        configs.push(c);
                    }
                }
            }
        }
    }
    Ok(configs)
}

pub const SUMMARY_HEADER: &str = "run,shape,lambda0,lambda1,radius,family,amplitude,label,outcome,t_star,energy_initial,energy_final,decrement_final,energy_residual,lambda_fit,r_squared,max_strong_ratio";

fn row(index: usize, c: &RunConfig, s: &RunSummary) -> String {
    let t_star = match s.outcome {
        Outcome::Blowup { t_star, .. } => Some(t_star),
        Outcome::Global => None,
    };
    let max_strong = s.observation.as_ref().and_then(|o| {
        o.entries
            .iter()
            .map(|e| match e.strong {
                Ratio::Finite(x) => Some(x),
                _ => None,
            })
            .try_fold(0.0f64, |m, x| x.map(|x| m.max(x)))
    });
    let mut out = String::new();
    write!(
        out,
        "{index},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        c.damping.shape,
        c.damping.lambda0,
        c.damping.lambda1,
        c.damping.radius,
        c.data.name(),
        c.data.amplitude(),
        s.initial.label.name(),
        s.outcome.name(),
        cell(t_star),
        s.energy_initial,
        s.energy_final,
        s.decrement_final,
        s.energy_residual,
        cell(s.decay.map(|d| d.rate)),
        cell(s.decay.and_then(|d| d.r_squared)),
        cell(max_strong),
    )
    .unwrap();
    out
}

/// Runs every expanded configuration in parallel; rows keep expansion order.
pub fn cmd_sweep(ctx: &Context) -> Result<Vec<RunSummary>> {
    let configs = expand(ctx)?;
    // warm the ground-state cache before the parallel section
    if let Some(first) = configs.first() {
        let own = ctx.ground_for(first)?;
        ctx.threshold(first, own.as_ref())?;
    }
    let results: Vec<Result<RunSummary>> = configs
        .par_iter()
        .enumerate()
        .map(|(i, c)| simulate_into(ctx, c, &ctx.out.join("runs").join(format!("run_{i:03}"))))
        .collect();
    let summaries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut table = String::from(SUMMARY_HEADER);
    table.push('\n');
    for (i, (c, s)) in configs.iter().zip(&summaries).enumerate() {
        table.push_str(&row(i, c, s));
        table.push('\n');
    }
    write_text(&ctx.out.join("summary.csv"), &table)?;
    Ok(summaries)
}

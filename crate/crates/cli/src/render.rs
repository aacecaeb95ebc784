//! Text rendering for the matrix, tower and zcross commands. All output is
//! deterministic (canonical term order, fixed grid order) so it can be
//! golden-file tested.

use crate::CliError;
use o2sym::numeric::NumericOperator;
use o2sym::tower::{self, RelationStatus, TowerLevel};
use o2sym::zcross;
use o2sym::DEFAULT_DEPTH_CEILING;
use std::fmt::Write;

pub fn dense_matrix(op: &NumericOperator) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "rows {} cols {} src_depth {} dst_depth {}",
        op.rows(),
        op.cols(),
        op.src_depth(),
        op.dst_depth()
    )
    .unwrap();
    for row in op.to_dense() {
        let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn sparse_matrix(op: &NumericOperator) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "rows {} cols {} src_depth {} dst_depth {}",
        op.rows(),
        op.cols(),
        op.src_depth(),
        op.dst_depth()
    )
    .unwrap();
    let mut entries: Vec<(u64, u64, String)> = op
        .entries()
        .map(|(r, c, v)| (r, c, v.to_string()))
        .collect();
    entries.sort_by_key(|(r, c, _)| (*r, *c));
    for (r, c, v) in entries {
        writeln!(out, "({r}, {c}, {v})").unwrap();
    }
    out
}

fn render_level(out: &mut String, level: &TowerLevel) {
    writeln!(out, "level {}", level.index).unwrap();
    writeln!(out, "r:").unwrap();
    writeln!(out, "{}", level.r.to_lines()).unwrap();
    writeln!(out, "t:").unwrap();
    writeln!(out, "{}", level.t.to_lines()).unwrap();
    match &level.w {
        Some(w) => {
            writeln!(out, "w:").unwrap();
            writeln!(out, "{}", w.to_lines()).unwrap();
            writeln!(
                out,
                "terms: r={} t={} w={} max_depth={}",
                level.r.term_count(),
                level.t.term_count(),
                w.term_count(),
                level
                    .r
                    .max_depth()
                    .max(level.t.max_depth())
                    .max(w.max_depth())
            )
            .unwrap();
        }
        None => {
            writeln!(out, "w: (not representable at this level)").unwrap();
            writeln!(
                out,
                "terms: r={} t={} max_depth={}",
                level.r.term_count(),
                level.t.term_count(),
                level.r.max_depth().max(level.t.max_depth())
            )
            .unwrap();
        }
    }
    for check in tower::verify_level(level).checks {
        let verdict = match check.status {
            RelationStatus::Pass => "pass",
            RelationStatus::Fail => "FAIL",
            RelationStatus::Skipped => "skipped",
        };
        writeln!(out, "check {}: {}", check.name, verdict).unwrap();
    }
}

/// Walk `steps` levels down (or up) from `(S1, S2, W)`, verifying each
/// level. Returns the rendered report and the exit code.
pub fn tower_walk(steps: u32, down: bool) -> Result<(String, u8), CliError> {
    let mut out = String::new();
    let mut level = tower::base_level();
    render_level(&mut out, &level);
    for step in 0..steps {
        let next = if down {
            tower::descend(&level, DEFAULT_DEPTH_CEILING)
        } else {
            tower::ascend(&level, DEFAULT_DEPTH_CEILING)
        };
        match next {
            Ok(next) => {
                out.push('\n');
                render_level(&mut out, &next);
                level = next;
            }
            Err(e) => {
                // surface partial output plus the error
                print!("{out}");
                let mut err: CliError = e.into();
                err.message = format!("step {}: {}", step + 1, err.message);
                return Err(err);
            }
        }
    }
    let ok = {
        // exit reflects the printed verdicts
        !out.contains("FAIL")
    };
    Ok((out, if ok { 0 } else { 1 }))
}

/// Run the sampled Z-crossed-product checks; returns the report and
/// whether everything passed.
pub fn zcross_report() -> (String, bool) {
    let mut out = String::new();
    let mut ok = true;
    let mut record = |out: &mut String, label: &str, pass: bool| {
        writeln!(out, "{}: {}", label, if pass { "pass" } else { "FAIL" }).unwrap();
        ok &= pass;
    };

    let v = zcross::field_v();
    for p in zcross::GridPoint::ALL {
        record(
            &mut out,
            &format!("v({p}) = e^(i*pi*t/2)*W sample"),
            *v.value(p) == o2sym::algebra::generators::w().scale(&p.phase()),
        );
    }
    record(
        &mut out,
        "boundary v(-1) = sigma_hat(v(1))",
        *v.value(zcross::GridPoint::NegOne) == v.value(zcross::GridPoint::PosOne).sigma_hat(),
    );
    record(
        &mut out,
        "v unitary at every grid point",
        v.is_unitary_pointwise(),
    );
    let vv = v.mul(&v);
    record(&mut out, "v^2 scalar at every grid point", {
        zcross::GridPoint::ALL
            .iter()
            .all(|&p| vv.value(p).as_scalar() == Some(p.square_phase()))
    });
    for check in zcross::check_covariance() {
        record(
            &mut out,
            &format!("v s1 v' = s2 at t = {}", check.point),
            check.v_s1_v_adj_is_s2,
        );
        record(
            &mut out,
            &format!("v s2 v' = s1 at t = {}", check.point),
            check.v_s2_v_adj_is_s1,
        );
    }
    for (name, field) in [
        ("v", zcross::field_v()),
        ("s1", zcross::field_s1()),
        ("s2", zcross::field_s2()),
    ] {
        let report = zcross::corollary_form(&field);
        record(
            &mut out,
            &format!("{name}: f(1)+f(-1) symmetric"),
            report.sum_symmetric,
        );
        record(
            &mut out,
            &format!("{name}: f(1)-f(-1) antisymmetric"),
            report.difference_antisymmetric,
        );
    }
    (out, ok)
}

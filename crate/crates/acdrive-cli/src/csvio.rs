//! CSV serialization of trajectories and observability reports.
//!
//! Floats are written with 17 significant digits so parsing an emitted file
//! reproduces the in-memory doubles bit for bit. Null margins serialize as
//! empty fields. Files are written to a temporary sibling and renamed into
//! place so a failed run leaves no partial output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use acdrive::linalg::{Vec2, Vec3};
use acdrive::models::{ImState, SmState};
use acdrive::obsv::ObservabilityReport;
use acdrive::sim::{Sample, Trajectory, TrajectoryData};

const IM_STATE_COLS: [&str; 6] = ["i_salpha", "i_sbeta", "psi_ralpha", "psi_rbeta", "omega_e", "t_r"];
const IM_INPUT_COLS: [&str; 2] = ["v_salpha", "v_sbeta"];
const SM_STATE_COLS: [&str; 5] = ["i_alpha", "i_beta", "i_f", "omega", "theta"];
const SM_INPUT_COLS: [&str; 3] = ["v_alpha", "v_beta", "v_f"];

/// 17-significant-digit decimal form, lossless for `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_atomically(path: &Path, contents: &str) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn im_state_fields(x: &ImState<f64>) -> [f64; 6] {
    x.to_vec().0
}

fn sm_state_fields(x: &SmState<f64>) -> [f64; 5] {
    x.to_vec().0
}

/// Write a trajectory CSV (`t`, state, input, input rate per sample).
pub fn write_trajectory(traj: &TrajectoryData<f64>, path: &Path) -> io::Result<()> {
    let mut out = String::new();
    match traj {
        TrajectoryData::Im(traj) => {
            let mut header = vec!["t".to_string()];
            header.extend(IM_STATE_COLS.iter().map(|s| s.to_string()));
            header.extend(IM_INPUT_COLS.iter().map(|s| s.to_string()));
            header.extend(IM_INPUT_COLS.iter().map(|s| format!("{s}_dot")));
            out.push_str(&header.join(","));
            out.push('\n');
            for s in &traj.samples {
                let mut row = vec![fmt_f64(s.t)];
                row.extend(im_state_fields(&s.state).iter().map(|v| fmt_f64(*v)));
                row.extend([fmt_f64(s.u[0]), fmt_f64(s.u[1])]);
                row.extend([fmt_f64(s.u_dot[0]), fmt_f64(s.u_dot[1])]);
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        TrajectoryData::Sm(traj) => {
            let mut header = vec!["t".to_string()];
            header.extend(SM_STATE_COLS.iter().map(|s| s.to_string()));
            header.extend(SM_INPUT_COLS.iter().map(|s| s.to_string()));
            header.extend(SM_INPUT_COLS.iter().map(|s| format!("{s}_dot")));
            out.push_str(&header.join(","));
            out.push('\n');
            for s in &traj.samples {
                let mut row = vec![fmt_f64(s.t)];
                row.extend(sm_state_fields(&s.state).iter().map(|v| fmt_f64(*v)));
                row.extend((0..3).map(|k| fmt_f64(s.u[k])));
                row.extend((0..3).map(|k| fmt_f64(s.u_dot[k])));
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
    }
    write_atomically(path, &out)
}

/// Parse a trajectory CSV produced by [`write_trajectory`]; the machine
/// family is recovered from the header.
pub fn read_trajectory(path: &Path) -> Result<TrajectoryData<f64>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let cols: Vec<&str> = header.split(',').collect();

    let parse_row = |line: &str, expect: usize| -> Result<Vec<f64>, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expect {
            return Err(format!("row has {} fields, expected {expect}", fields.len()));
        }
        fields
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| format!("bad float `{f}`: {e}")))
            .collect()
    };

    if cols.len() == 1 + 6 + 2 + 2 && cols[1] == IM_STATE_COLS[0] {
        let mut samples = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let v = parse_row(line, 11)?;
            samples.push(Sample {
                t: v[0],
                state: ImState {
                    i_s: Vec2::new(v[1], v[2]),
                    psi_r: Vec2::new(v[3], v[4]),
                    omega_e: v[5],
                    t_r: v[6],
                },
                u: Vec3::new(v[7], v[8], 0.0),
                u_dot: Vec3::new(v[9], v[10], 0.0),
            });
        }
        let dt = if samples.len() > 1 { samples[1].t } else { 0.0 };
        Ok(TrajectoryData::Im(Trajectory { dt, samples }))
    } else if cols.len() == 1 + 5 + 3 + 3 && cols[1] == SM_STATE_COLS[0] {
        let mut samples = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let v = parse_row(line, 12)?;
            samples.push(Sample {
                t: v[0],
                state: SmState {
                    i: Vec3::new(v[1], v[2], v[3]),
                    omega: v[4],
                    theta: v[5],
                },
                u: Vec3::new(v[6], v[7], v[8]),
                u_dot: Vec3::new(v[9], v[10], v[11]),
            });
        }
        let dt = if samples.len() > 1 { samples[1].t } else { 0.0 };
        Ok(TrajectoryData::Sm(Trajectory { dt, samples }))
    } else {
        Err(format!("unrecognized trajectory header: {header}"))
    }
}

/// Write the observability report CSV: per sample `t`, state, input,
/// determinants, singular values, rank, margins, approximation factor and
/// the observability flag.
pub fn write_report(
    report: &ObservabilityReport<f64>,
    traj: &TrajectoryData<f64>,
    path: &Path,
) -> io::Result<()> {
    let (state_cols, input_cols): (&[&str], &[&str]) = match traj {
        TrajectoryData::Im(_) => (&IM_STATE_COLS, &IM_INPUT_COLS),
        TrajectoryData::Sm(_) => (&SM_STATE_COLS, &SM_INPUT_COLS),
    };
    let mut header = vec!["t".to_string()];
    header.extend(state_cols.iter().map(|s| s.to_string()));
    header.extend(input_cols.iter().map(|s| s.to_string()));
    header.extend(
        [
            "delta_closed",
            "delta_numeric",
            "sigma_min",
            "sigma_max",
            "rank",
            "margin_lhs",
            "margin_rhs",
            "approx_factor",
            "observable",
        ]
        .iter()
        .map(|s| s.to_string()),
    );

    let mut out = header.join(",");
    out.push('\n');

    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for (k, r) in report.samples.iter().enumerate() {
        let mut row = vec![fmt_f64(r.t)];
        match traj {
            TrajectoryData::Im(t) => {
                let s = &t.samples[k];
                row.extend(im_state_fields(&s.state).iter().map(|v| fmt_f64(*v)));
                row.extend([fmt_f64(s.u[0]), fmt_f64(s.u[1])]);
            }
            TrajectoryData::Sm(t) => {
                let s = &t.samples[k];
                row.extend(sm_state_fields(&s.state).iter().map(|v| fmt_f64(*v)));
                row.extend((0..3).map(|c| fmt_f64(s.u[c])));
            }
        }
        row.push(fmt_f64(r.delta_closed));
        row.push(opt(r.delta_numeric));
        row.push(fmt_f64(r.sigma_min));
        row.push(fmt_f64(r.sigma_max));
        row.push(r.rank.to_string());
        row.push(opt(r.margin_lhs));
        row.push(opt(r.margin_rhs));
        row.push(opt(r.approx_factor));
        row.push(if r.observable { "true" } else { "false" }.to_string());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    write_atomically(path, &out)
}

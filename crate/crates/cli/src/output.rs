//! Trajectory writers. CSV is the golden-file format: '.' decimal, 17
//! significant digits, fixed column order, byte-stable for a fixed config.

use serde::Serialize;

use qspin_core::Trajectory;

fn sig17(v: f64) -> String {
    format!("{:.16e}", v)
}

pub const CSV_HEADER: &str =
    "t,q_w,q_x,q_y,q_z,bloch_x,bloch_y,bloch_z,norm,L2,vhat_x,vhat_y,vhat_z";

pub fn to_csv(tr: &Trajectory) -> String {
    let mut out = String::with_capacity(tr.samples.len() * 13 * 26);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &tr.samples {
        let cols = [
            s.t, s.q.w, s.q.x, s.q.y, s.q.z, s.bloch.x, s.bloch.y, s.bloch.z, s.norm, s.l2,
            s.vhat.x, s.vhat.y, s.vhat.z,
        ];
        let row: Vec<String> = cols.iter().map(|v| sig17(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonSample {
    t: f64,
    q: [f64; 4],
    bloch: [f64; 3],
    norm: f64,
    l2: f64,
    vhat: [f64; 3],
}

#[derive(Serialize)]
struct JsonTrajectory {
    method: &'static str,
    omega0: f64,
    vhat0: [f64; 3],
    samples: Vec<JsonSample>,
}

pub fn to_json(tr: &Trajectory) -> String {
    let doc = JsonTrajectory {
        method: tr.method.name(),
        omega0: tr.omega0,
        vhat0: [tr.vhat0.x(), tr.vhat0.y(), tr.vhat0.z()],
        samples: tr
            .samples
            .iter()
            .map(|s| JsonSample {
                t: s.t,
                q: [s.q.w, s.q.x, s.q.y, s.q.z],
                bloch: [s.bloch.x, s.bloch.y, s.bloch.z],
                norm: s.norm,
                l2: s.l2,
                vhat: [s.vhat.x, s.vhat.y, s.vhat.z],
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

//! Run configuration: a single TOML document with a nested field-profile
//! block and exactly one initial-state form.

use serde::{Deserialize, Serialize};

use qspin_core::{
    angles_to_quaternion, BlochAngles, FieldProfile, FirstOrderState, Method, PureUnitQuaternion,
    Segment, UnitQuaternion,
};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gamma: f64,
    pub omega0: f64,
    pub method: String,
    pub step: f64,
    pub t_end: f64,
    #[serde(default = "default_format")]
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub field: FieldConfig,
    pub initial: InitialConfig,
}

fn default_format() -> String {
    "csv".to_string()
}

fn default_seed() -> u64 {
    qspin_core::verify::DEFAULT_SEED
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldConfig {
    Constant {
        b: [f64; 3],
    },
    Rotating {
        b_perp: f64,
        b_z: f64,
        drive_omega: f64,
    },
    Piecewise {
        segments: Vec<SegmentConfig>,
    },
    Sampled {
        times: Vec<f64>,
        values: Vec<[f64; 3]>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    pub until: f64,
    pub b: [f64; 3],
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<AnglesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quaternion: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<BlochConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnglesConfig {
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BlochConfig {
    pub vector: [f64; 3],
    #[serde(default = "identity_quaternion")]
    pub fibration_u: [f64; 4],
}

fn identity_quaternion() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if self.step <= 0.0 {
            return Err(format!("step must be positive (got {})", self.step));
        }
        if self.t_end < 0.0 {
            return Err(format!("t_end must be nonnegative (got {})", self.t_end));
        }
        if self.method()?.is_none() {
            // unreachable: method() errs first
        }
        match self.format.as_str() {
            "csv" | "json" => {}
            other => return Err(format!("unknown format `{other}` (expected csv or json)")),
        }
        let provided = [
            self.initial.angles.is_some(),
            self.initial.quaternion.is_some(),
            self.initial.bloch.is_some(),
        ]
        .iter()
        .filter(|p| **p)
        .count();
        if provided != 1 {
            return Err(format!(
                "exactly one initial-state form must be provided (got {provided})"
            ));
        }
        Ok(())
    }

    fn method(&self) -> Result<Option<Method>, String> {
        match Method::parse(&self.method) {
            Some(m) => Ok(Some(m)),
            None => Err(format!(
                "unknown method `{}` (expected rk4-first, rk4-second, or exact)",
                self.method
            )),
        }
    }

    pub fn resolve_method(&self) -> Result<Method, String> {
        Ok(self.method()?.expect("validated"))
    }

    pub fn field_profile(&self) -> Result<FieldProfile, String> {
        let result = match &self.field {
            FieldConfig::Constant { b } => FieldProfile::constant(*b, self.gamma, self.omega0),
            FieldConfig::Rotating {
                b_perp,
                b_z,
                drive_omega,
            } => FieldProfile::rotating(*b_perp, *b_z, *drive_omega, self.gamma, self.omega0),
            FieldConfig::Piecewise { segments } => FieldProfile::piecewise(
                segments
                    .iter()
                    .map(|s| Segment {
                        until: s.until,
                        b: s.b,
                    })
                    .collect(),
                self.gamma,
                self.omega0,
            ),
            FieldConfig::Sampled { times, values } => {
                FieldProfile::sampled(times.clone(), values.clone(), self.gamma, self.omega0)
            }
        };
        result.map_err(|e| e.to_string())
    }

    /// Resolves the initial state. The Bloch form places the point through
    /// the fibration u (v̂ = u·i·ū); the other forms use the plain map v̂ = i.
    pub fn initial_state(&self) -> Result<FirstOrderState, String> {
        if let Some(a) = &self.initial.angles {
            let q = angles_to_quaternion(&BlochAngles {
                theta: a.theta,
                phi: a.phi,
                alpha: a.alpha,
            });
            return Ok(FirstOrderState {
                q,
                vhat: PureUnitQuaternion::I,
            });
        }
        if let Some(c) = &self.initial.quaternion {
            let q = UnitQuaternion::new(c[0], c[1], c[2], c[3]).map_err(|e| e.to_string())?;
            return Ok(FirstOrderState {
                q,
                vhat: PureUnitQuaternion::I,
            });
        }
        let b = self.initial.bloch.as_ref().expect("validated");
        let v = b.vector;
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(format!("initial Bloch vector has norm {norm}, expected 1"));
        }
        let theta = (v[2] / norm).acos();
        let phi = v[1].atan2(v[0]);
        let q_plain = angles_to_quaternion(&BlochAngles {
            theta,
            phi,
            alpha: 0.0,
        });
        let u = UnitQuaternion::new(
            b.fibration_u[0],
            b.fibration_u[1],
            b.fibration_u[2],
            b.fibration_u[3],
        )
        .map_err(|e| e.to_string())?;
        Ok(FirstOrderState {
            q: u * q_plain,
            vhat: u.sandwich(PureUnitQuaternion::I),
        })
    }
}

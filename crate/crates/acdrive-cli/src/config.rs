//! Scenario file parsing.
//!
//! Plain-text sectioned key-value format: section headers in brackets,
//! `key = value` lines, `#` starts a comment. Unknown sections or keys are
//! rejected; machine parameters that are not given fall back to the
//! desk-scale defaults with a notice on stderr.
//!
//! ```text
//! [machine]
//! type = im            # im | wrsm | n-wrsm | ipmsm | spmsm | syrm
//! r_s = 1.2            # parameter overrides, defaults apply when omitted
//!
//! [initial]            # state components by name; omitted ones are zero
//! omega_e = 301.59
//! steady_state = true  # IM only: electrical state from the phasor solve
//!
//! [excitation]
//! kind = sinusoid      # zero | dc | sinusoid | ramped-sinusoid | chirp
//! amplitude = 30.0
//! frequency = 50.0
//!
//! [load]
//! t_r = 0.5            # constant, or: segments = 0:0.0, 1.0:0.5
//!
//! [sim]
//! dt = 1e-4
//! duration = 1.0
//!
//! [analysis]
//! rank_tol = 1e-9
//! oracle = on
//! strict_fraction = 0.01
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use acdrive::linalg::{Vec2, Vec3};
use acdrive::models::{ImParams, ImState, SmParams, SmState, SmVariant};
use acdrive::sim::{
    steady_state_hint, AnalysisSettings, ExcitationKind, ExcitationProfile, FieldExcitation,
    MachineSpec, Scenario, TorqueProfile,
};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type ConfigResult<T> = Result<T, ConfigError>;

fn fail<T>(msg: impl Into<String>) -> ConfigResult<T> {
    Err(ConfigError(msg.into()))
}

struct Entry {
    key: String,
    value: String,
    line: usize,
    used: bool,
}

struct Section {
    name: String,
    entries: Vec<Entry>,
}

impl Section {
    fn empty(name: &str) -> Self {
        Self { name: name.to_string(), entries: Vec::new() }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        for e in self.entries.iter_mut() {
            if e.key == key && !e.used {
                e.used = true;
                return Some(e.value.clone());
            }
        }
        None
    }

    fn take_f64(&mut self, key: &str) -> ConfigResult<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Some(x)),
                _ => fail(format!("key `{key}`: `{v}` is not a finite number")),
            },
        }
    }

    fn take_u32(&mut self, key: &str) -> ConfigResult<Option<u32>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.parse::<u32>().map(Some).map_err(|_| {
                ConfigError(format!("key `{key}`: `{v}` is not a non-negative integer"))
            }),
        }
    }

    fn take_bool(&mut self, key: &str) -> ConfigResult<Option<bool>> {
        match self.take(key).as_deref() {
            None => Ok(None),
            Some("true") | Some("on") | Some("yes") => Ok(Some(true)),
            Some("false") | Some("off") | Some("no") => Ok(Some(false)),
            Some(v) => fail(format!("key `{key}`: `{v}` is not a boolean (true/false/on/off)")),
        }
    }

    fn reject_leftovers(&self) -> ConfigResult<()> {
        for e in &self.entries {
            if !e.used {
                return fail(format!(
                    "line {}: unknown key `{}` in section [{}]",
                    e.line, e.key, self.name
                ));
            }
        }
        Ok(())
    }
}

fn parse_sections(text: &str) -> ConfigResult<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let Some(name) = header.strip_suffix(']') else {
                return fail(format!("line {line_no}: malformed section header `{line}`"));
            };
            sections.push(Section::empty(name.trim()));
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return fail(format!("line {line_no}: expected `key = value`, got `{line}`"));
        };
        let Some(section) = sections.last_mut() else {
            return fail(format!(
                "line {line_no}: `{}` appears before any [section]",
                key.trim()
            ));
        };
        section.entries.push(Entry {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            line: line_no,
            used: false,
        });
    }
    Ok(sections)
}

/// Load and validate a scenario file.
pub fn load_scenario(path: &Path) -> ConfigResult<Scenario<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> ConfigResult<Scenario<f64>> {
    let sections = parse_sections(text)?;

    let known = ["machine", "initial", "excitation", "load", "sim", "analysis"];
    let mut seen = BTreeSet::new();
    for s in &sections {
        if !known.contains(&s.name.as_str()) {
            return fail(format!("unknown section [{}]", s.name));
        }
        if !seen.insert(s.name.clone()) {
            return fail(format!("duplicate section [{}]", s.name));
        }
    }

    let mut by_name: Vec<Option<Section>> = known.iter().map(|_| None).collect();
    for s in sections {
        let idx = known.iter().position(|n| *n == s.name).expect("known section");
        by_name[idx] = Some(s);
    }
    let mut grab = |name: &str| -> Section {
        let idx = known.iter().position(|n| *n == name).expect("known section");
        by_name[idx].take().unwrap_or_else(|| Section::empty(name))
    };

    let mut machine = grab("machine");
    let mut initial = grab("initial");
    let mut excitation = grab("excitation");
    let mut load = grab("load");
    let mut sim = grab("sim");
    let mut analysis = grab("analysis");

    // [machine]
    let Some(kind) = machine.take("type") else {
        return fail("section [machine] requires `type`");
    };
    enum Params {
        Im(ImParams<f64>),
        Sm(SmParams<f64>),
    }
    let mut defaulted: Vec<&str> = Vec::new();
    let params = if kind == "im" {
        let mut p = ImParams::<f64>::desk_default();
        let fields: [(&str, &mut f64); 6] = [
            ("r_s", &mut p.r_s),
            ("r_r", &mut p.r_r),
            ("l_s", &mut p.l_s),
            ("l_r", &mut p.l_r),
            ("m", &mut p.m),
            ("inertia", &mut p.inertia),
        ];
        for (key, slot) in fields {
            match machine.take_f64(key)? {
                Some(v) => *slot = v,
                None => defaulted.push(key),
            }
        }
        match machine.take_u32("pole_pairs")? {
            Some(v) => p.pole_pairs = v,
            None => defaulted.push("pole_pairs"),
        }
        Params::Im(p)
    } else {
        let variant = kind
            .parse::<SmVariant>()
            .map_err(|e| ConfigError(format!("key `type`: {e}")))?;
        let mut p = SmParams::<f64>::desk_default(variant);
        let fields: [(&str, &mut f64); 8] = [
            ("r_s", &mut p.r_s),
            ("r_f", &mut p.r_f),
            ("l0", &mut p.l0),
            ("l2", &mut p.l2),
            ("m_f", &mut p.m_f),
            ("l_f", &mut p.l_f),
            ("psi_r", &mut p.psi_r),
            ("inertia", &mut p.inertia),
        ];
        for (key, slot) in fields {
            match machine.take_f64(key)? {
                Some(v) => *slot = v,
                None => defaulted.push(key),
            }
        }
        match machine.take_u32("pole_pairs")? {
            Some(v) => p.pole_pairs = v,
            None => defaulted.push("pole_pairs"),
        }
        Params::Sm(p)
    };
    machine.reject_leftovers()?;
    if !defaulted.is_empty() {
        eprintln!(
            "notice: machine parameters defaulted to the desk-scale set: {}",
            defaulted.join(", ")
        );
    }

    // [excitation]
    let kind = match excitation.take("kind").as_deref() {
        None | Some("zero") => ExcitationKind::Zero,
        Some("dc") => ExcitationKind::Dc,
        Some("sinusoid") => ExcitationKind::Sinusoid,
        Some("ramped-sinusoid") => ExcitationKind::RampedSinusoid,
        Some("chirp") => ExcitationKind::Chirp,
        Some(other) => return fail(format!("key `kind`: unknown excitation kind `{other}`")),
    };
    let profile = ExcitationProfile {
        kind,
        amplitude: excitation.take_f64("amplitude")?.unwrap_or(0.0),
        frequency: excitation.take_f64("frequency")?.unwrap_or(0.0),
        frequency_rate: excitation.take_f64("frequency_rate")?.unwrap_or(0.0),
        phase: excitation.take_f64("phase")?.unwrap_or(0.0),
        field: FieldExcitation {
            voltage: excitation.take_f64("field_voltage")?.unwrap_or(0.0),
            amplitude: excitation.take_f64("field_amplitude")?.unwrap_or(0.0),
            frequency: excitation.take_f64("field_frequency")?.unwrap_or(0.0),
        },
    };
    excitation.reject_leftovers()?;

    // [load]
    let t_r_const = load.take_f64("t_r")?;
    let segments_text = load.take("segments");
    load.reject_leftovers()?;
    let load_profile = match (t_r_const, segments_text) {
        (Some(_), Some(_)) => {
            return fail("section [load] accepts `t_r` or `segments`, not both")
        }
        (Some(v), None) => TorqueProfile::constant(v),
        (None, Some(text)) => {
            let mut segs = Vec::new();
            for piece in text.split(',') {
                let piece = piece.trim();
                if piece.is_empty() {
                    continue;
                }
                let Some((t, v)) = piece.split_once(':') else {
                    return fail(format!(
                        "key `segments`: `{piece}` is not a `t_start:value` pair"
                    ));
                };
                let t = t.trim().parse::<f64>().map_err(|_| {
                    ConfigError(format!("key `segments`: `{}` is not a number", t.trim()))
                })?;
                let v = v.trim().parse::<f64>().map_err(|_| {
                    ConfigError(format!("key `segments`: `{}` is not a number", v.trim()))
                })?;
                segs.push((t, v));
            }
            TorqueProfile::from_segments(segs)
                .map_err(|e| ConfigError(format!("key `segments`: {e}")))?
        }
        (None, None) => TorqueProfile::none(),
    };

    // [sim]
    let Some(dt) = sim.take_f64("dt")? else {
        return fail("section [sim] requires `dt`");
    };
    let Some(duration) = sim.take_f64("duration")? else {
        return fail("section [sim] requires `duration`");
    };
    sim.reject_leftovers()?;

    // [analysis]
    let mut settings = AnalysisSettings::<f64>::default();
    if let Some(v) = analysis.take_f64("rank_tol")? {
        settings.rank_tol = v;
    }
    if let Some(v) = analysis.take_bool("oracle")? {
        settings.oracle = v;
    }
    if let Some(v) = analysis.take_f64("strict_fraction")? {
        settings.strict_fraction = v;
    }
    analysis.reject_leftovers()?;

    // [initial] + assemble
    let steady = initial.take_bool("steady_state")?.unwrap_or(false);
    let machine_spec = match params {
        Params::Im(p) => {
            let x0 = ImState {
                i_s: Vec2::new(
                    initial.take_f64("i_salpha")?.unwrap_or(0.0),
                    initial.take_f64("i_sbeta")?.unwrap_or(0.0),
                ),
                psi_r: Vec2::new(
                    initial.take_f64("psi_ralpha")?.unwrap_or(0.0),
                    initial.take_f64("psi_rbeta")?.unwrap_or(0.0),
                ),
                omega_e: initial.take_f64("omega_e")?.unwrap_or(0.0),
                t_r: initial.take_f64("t_r")?.unwrap_or(0.0),
            };
            MachineSpec::Im { params: p, x0 }
        }
        Params::Sm(p) => {
            if steady {
                return fail("key `steady_state`: only supported for the induction machine");
            }
            let i_f = match (p.pinned_field_current(), initial.take_f64("i_f")?) {
                (Some(pin), None) => pin,
                (Some(pin), Some(v)) => {
                    if v != pin {
                        return fail(format!(
                            "key `i_f`: pinned to {pin} for {}, got {v}",
                            p.variant
                        ));
                    }
                    pin
                }
                (None, v) => v.unwrap_or(0.0),
            };
            let x0 = SmState {
                i: Vec3::new(
                    initial.take_f64("i_alpha")?.unwrap_or(0.0),
                    initial.take_f64("i_beta")?.unwrap_or(0.0),
                    i_f,
                ),
                omega: initial.take_f64("omega")?.unwrap_or(0.0),
                theta: initial.take_f64("theta")?.unwrap_or(0.0),
            };
            MachineSpec::Sm { params: p, x0 }
        }
    };
    initial.reject_leftovers()?;

    let mut scenario = Scenario {
        machine: machine_spec,
        excitation: profile,
        load: load_profile,
        dt,
        duration,
        analysis: settings,
    };
    scenario
        .validate()
        .map_err(|e| ConfigError(e.to_string()))?;

    if steady {
        let hint = steady_state_hint(&scenario).map_err(|e| ConfigError(e.to_string()))?;
        match &mut scenario.machine {
            MachineSpec::Im { x0, .. } => *x0 = hint,
            MachineSpec::Sm { .. } => unreachable!("steady_state rejected for SM above"),
        }
    }
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_IM: &str = "\
[machine]
type = im

[sim]
dt = 1e-4
duration = 0.01
";

    #[test]
    fn minimal_scenario_uses_defaults() {
        let sc = parse_scenario(MINIMAL_IM).unwrap();
        assert_eq!(sc.dt, 1e-4);
        match sc.machine {
            MachineSpec::Im { params, x0 } => {
                assert_eq!(params, ImParams::desk_default());
                assert_eq!(x0, ImState::zero());
            }
            _ => panic!("expected IM"),
        }
    }

    #[test]
    fn unknown_key_rejected_by_name() {
        let text = MINIMAL_IM.replace("type = im", "type = im\nbogus_key = 3");
        let e = parse_scenario(&text).unwrap_err();
        assert!(e.0.contains("bogus_key"), "{e}");
    }

    #[test]
    fn unknown_section_rejected() {
        let text = format!("{MINIMAL_IM}\n[plots]\nx = 1\n");
        assert!(parse_scenario(&text).is_err());
    }

    #[test]
    fn sigma_violation_reported() {
        let text = "\
[machine]
type = im
m = 0.2

[sim]
dt = 1e-4
duration = 0.01
";
        let e = parse_scenario(text).unwrap_err();
        assert!(e.0.contains("sigma"), "{e}");
    }

    #[test]
    fn segments_parse() {
        let text = "\
[machine]
type = wrsm

[load]
segments = 0:0.0, 0.5:2.0, 1.0:0.5

[sim]
dt = 1e-4
duration = 0.01
";
        let sc = parse_scenario(text).unwrap();
        assert_eq!(sc.load.segments(), &[(0.0, 0.0), (0.5, 2.0), (1.0, 0.5)]);
    }

    #[test]
    fn pinned_field_current_mismatch_rejected() {
        let text = "\
[machine]
type = ipmsm

[initial]
i_f = 1.0

[sim]
dt = 1e-4
duration = 0.01
";
        let e = parse_scenario(text).unwrap_err();
        assert!(e.0.contains("i_f"), "{e}");
    }

    #[test]
    fn comments_and_whitespace_tolerated() {
        let text = "\
# leading comment
[machine]
type = im   # trailing comment
r_s = 1.5

[sim]
dt = 1e-4   # grid
duration = 0.01
";
        let sc = parse_scenario(text).unwrap();
        match sc.machine {
            MachineSpec::Im { params, .. } => assert_eq!(params.r_s, 1.5),
            _ => unreachable!(),
        }
    }
}

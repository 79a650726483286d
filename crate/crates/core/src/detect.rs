//! Threshold comparison: metric values in, smell findings out.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::metrics::{measure_unit, MetricKind, MetricOptions, MetricValue};
use crate::syntax::{extract_entities, SourceSpan, SourceUnit};

/// The eight smells, declared in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Smell {
    /// Long method.
    LM,
    /// Large class.
    LC,
    /// Long parameter list.
    LPL,
    /// Long message chain.
    LMC,
    /// Long scope chaining.
    LSC,
    /// Long ternary conditional expression.
    LTCE,
    /// Multiply-nested container.
    MNC,
    /// Long lambda function.
    LLF,
}

impl Smell {
    pub const ALL: [Smell; 8] = [
        Smell::LM,
        Smell::LC,
        Smell::LPL,
        Smell::LMC,
        Smell::LSC,
        Smell::LTCE,
        Smell::MNC,
        Smell::LLF,
    ];

    pub fn metric(self) -> MetricKind {
        match self {
            Smell::LM => MetricKind::FunctionLoc,
            Smell::LC => MetricKind::ClassLoc,
            Smell::LPL => MetricKind::NumParameters,
            Smell::LMC => MetricKind::ChainLength,
            Smell::LSC => MetricKind::ClosureDepth,
            Smell::LTCE => MetricKind::TernaryChars,
            Smell::MNC => MetricKind::ContainerDepth,
            Smell::LLF => MetricKind::LambdaChars,
        }
    }

    pub fn for_metric(metric: MetricKind) -> Smell {
        match metric {
            MetricKind::FunctionLoc => Smell::LM,
            MetricKind::ClassLoc => Smell::LC,
            MetricKind::NumParameters => Smell::LPL,
            MetricKind::ChainLength => Smell::LMC,
            MetricKind::ClosureDepth => Smell::LSC,
            MetricKind::TernaryChars => Smell::LTCE,
            MetricKind::ContainerDepth => Smell::MNC,
            MetricKind::LambdaChars => Smell::LLF,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Smell::LM => "LM",
            Smell::LC => "LC",
            Smell::LPL => "LPL",
            Smell::LMC => "LMC",
            Smell::LSC => "LSC",
            Smell::LTCE => "LTCE",
            Smell::MNC => "MNC",
            Smell::LLF => "LLF",
        }
    }

    /// Profile key holding this smell's threshold.
    pub fn profile_key(self) -> &'static str {
        match self {
            Smell::LM => "lm_function_loc",
            Smell::LC => "lc_class_loc",
            Smell::LPL => "lpl_num_params",
            Smell::LMC => "lmc_chain_length",
            Smell::LSC => "lsc_closure_depth",
            Smell::LTCE => "ltce_chars",
            Smell::MNC => "mnc_container_depth",
            Smell::LLF => "llf_chars",
        }
    }
}

impl fmt::Display for Smell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Smell {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Smell::ALL
            .into_iter()
            .find(|smell| smell.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown smell `{s}`"))
    }
}

/// Cutoffs for the eight metrics. A construct is flagged when its measured
/// value is strictly greater than the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThresholdProfile {
    pub lm_function_loc: u64,
    pub lc_class_loc: u64,
    pub lpl_num_params: u64,
    pub lmc_chain_length: u64,
    pub lsc_closure_depth: u64,
    pub ltce_chars: u64,
    pub mnc_container_depth: u64,
    pub llf_chars: u64,
}

impl Default for ThresholdProfile {
    fn default() -> Self {
        ThresholdProfile {
            lm_function_loc: 38,
            lc_class_loc: 29,
            lpl_num_params: 5,
            lmc_chain_length: 5,
            lsc_closure_depth: 3,
            ltce_chars: 54,
            mnc_container_depth: 3,
            llf_chars: 48,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("malformed threshold config: {0}")]
    Malformed(String),
    #[error("unknown threshold key `{0}`")]
    UnknownKey(String),
    #[error("threshold `{key}` must be an integer, got {found}")]
    NotAnInteger { key: String, found: String },
    #[error("threshold `{key}` must be positive, got {value}")]
    NonPositive { key: String, value: i64 },
}

impl ThresholdProfile {
    pub fn get(&self, smell: Smell) -> u64 {
        match smell {
            Smell::LM => self.lm_function_loc,
            Smell::LC => self.lc_class_loc,
            Smell::LPL => self.lpl_num_params,
            Smell::LMC => self.lmc_chain_length,
            Smell::LSC => self.lsc_closure_depth,
            Smell::LTCE => self.ltce_chars,
            Smell::MNC => self.mnc_container_depth,
            Smell::LLF => self.llf_chars,
        }
    }

    pub fn set(&mut self, smell: Smell, value: u64) {
        let slot = match smell {
            Smell::LM => &mut self.lm_function_loc,
            Smell::LC => &mut self.lc_class_loc,
            Smell::LPL => &mut self.lpl_num_params,
            Smell::LMC => &mut self.lmc_chain_length,
            Smell::LSC => &mut self.lsc_closure_depth,
            Smell::LTCE => &mut self.ltce_chars,
            Smell::MNC => &mut self.mnc_container_depth,
            Smell::LLF => &mut self.llf_chars,
        };
        *slot = value;
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        match Smell::ALL.into_iter().find(|&s| self.get(s) == 0) {
            Some(smell) => Err(ProfileError::NonPositive {
                key: smell.profile_key().to_string(),
                value: 0,
            }),
            None => Ok(()),
        }
    }

    /// The profile as `key = value` lines, loadable by [`load_profile`].
    pub fn to_config_text(&self) -> String {
        Smell::ALL
            .into_iter()
            .map(|smell| format!("{} = {}\n", smell.profile_key(), self.get(smell)))
            .collect()
    }
}

/// Resolve a config key: the full profile key or the bare smell acronym.
fn smell_for_key(key: &str) -> Option<Smell> {
    Smell::ALL
        .into_iter()
        .find(|s| s.profile_key() == key || s.as_str().eq_ignore_ascii_case(key))
}

/// Build a profile from flat `key = value` text. Missing keys keep their
/// defaults; `None` yields the defaults outright.
pub fn load_profile(source: Option<&str>) -> Result<ThresholdProfile, ProfileError> {
    let mut profile = ThresholdProfile::default();
    let Some(text) = source else {
        return Ok(profile);
    };
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ProfileError::Malformed(e.message().to_string()))?;
    for (key, value) in table {
        let smell = smell_for_key(&key).ok_or_else(|| ProfileError::UnknownKey(key.clone()))?;
        let value = match value {
            toml::Value::Integer(v) => v,
            other => {
                return Err(ProfileError::NotAnInteger {
                    key,
                    found: other.to_string(),
                })
            }
        };
        if value <= 0 {
            return Err(ProfileError::NonPositive { key, value });
        }
        profile.set(smell, value as u64);
    }
    Ok(profile)
}

/// One detected smell occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmellFinding {
    pub smell: Smell,
    pub file: PathBuf,
    pub span: SourceSpan,
    pub entity_name: Option<String>,
    pub measured: u64,
    pub threshold: u64,
}

/// Flag a single measurement if it exceeds its threshold.
pub fn detect_entity(
    metric: &MetricValue,
    profile: &ThresholdProfile,
    file: &Path,
) -> Option<SmellFinding> {
    let smell = Smell::for_metric(metric.metric);
    let threshold = profile.get(smell);
    (metric.value > threshold).then(|| SmellFinding {
        smell,
        file: file.to_path_buf(),
        span: metric.span,
        entity_name: metric.entity_name.clone(),
        measured: metric.value,
        threshold,
    })
}

/// All findings in one unit, ordered by position then smell. Units that
/// failed to parse have none.
pub fn detect_file(
    unit: &SourceUnit,
    profile: &ThresholdProfile,
    options: MetricOptions,
) -> Vec<SmellFinding> {
    if !unit.parse_status.is_ok() {
        return Vec::new();
    }
    let entities = extract_entities(unit);
    let mut findings: Vec<SmellFinding> = measure_unit(unit, &entities, options)
        .iter()
        .filter_map(|m| detect_entity(m, profile, &unit.path))
        .collect();
    findings.sort_by_key(|f| {
        (
            f.span.start_line,
            f.span.start_col,
            f.smell,
            f.span.end_byte,
        )
    });
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_source, EntityId};
    use proptest::prelude::*;

    fn metric(metric: MetricKind, value: u64) -> MetricValue {
        MetricValue {
            metric,
            entity: EntityId(0),
            span: SourceSpan::point(1, 0),
            entity_name: None,
            value,
        }
    }

    fn smells(src: &str) -> Vec<(Smell, u64)> {
        let unit = parse_source("s.py", src);
        detect_file(
            &unit,
            &ThresholdProfile::default(),
            MetricOptions::default(),
        )
        .into_iter()
        .map(|f| (f.smell, f.measured))
        .collect()
    }

    fn function_of_loc(loc: usize) -> String {
        let mut src = String::from("def f():\n");
        for i in 1..loc {
            src.push_str(&format!("    v{i} = {i}\n"));
        }
        src
    }

    #[test]
    fn defaults_match_table() {
        let p = ThresholdProfile::default();
        let values: Vec<u64> = Smell::ALL.iter().map(|&s| p.get(s)).collect();
        assert_eq!(values, vec![38, 29, 5, 5, 3, 54, 3, 48]);
    }

    #[test]
    fn boundary_is_not_flagged() {
        assert!(smells(&function_of_loc(38)).is_empty());
        assert_eq!(smells(&function_of_loc(39)), vec![(Smell::LM, 39)]);
    }

    #[test]
    fn six_link_chain_is_flagged() {
        assert_eq!(smells("a.b.c.d.e.f.g\n"), vec![(Smell::LMC, 6)]);
        assert!(smells("a.b.c.d.e.f\n").is_empty());
    }

    #[test]
    fn detect_entity_examples() {
        let p = ThresholdProfile::default();
        let file = Path::new("x.py");
        assert_eq!(
            detect_entity(&metric(MetricKind::NumParameters, 5), &p, file),
            None
        );
        let lpl = detect_entity(&metric(MetricKind::NumParameters, 6), &p, file).unwrap();
        assert_eq!((lpl.smell, lpl.measured, lpl.threshold), (Smell::LPL, 6, 5));
        let mnc = detect_entity(&metric(MetricKind::ContainerDepth, 4), &p, file).unwrap();
        assert_eq!((mnc.smell, mnc.threshold), (Smell::MNC, 3));
    }

    #[test]
    fn one_entity_can_carry_several_smells() {
        let mut src = String::from("def f(a, b, c, d, e, g):\n");
        for i in 0..40 {
            src.push_str(&format!("    v{i} = {i}\n"));
        }
        assert_eq!(smells(&src), vec![(Smell::LM, 41), (Smell::LPL, 6)]);
    }

    #[test]
    fn failed_unit_has_no_findings() {
        assert!(smells("print 'x'\n").is_empty());
    }

    #[test]
    fn load_profile_examples() {
        assert_eq!(load_profile(None).unwrap(), ThresholdProfile::default());
        assert_eq!(load_profile(Some("")).unwrap(), ThresholdProfile::default());

        let p = load_profile(Some("lm = 10\n")).unwrap();
        assert_eq!(p.lm_function_loc, 10);
        assert_eq!(p.lc_class_loc, 29);
        let p = load_profile(Some("# tuned\nlm_function_loc = 12\n")).unwrap();
        assert_eq!(p.lm_function_loc, 12);

        assert_eq!(
            load_profile(Some("lm = 0")),
            Err(ProfileError::NonPositive {
                key: "lm".into(),
                value: 0
            })
        );
        assert_eq!(
            load_profile(Some("bogus = 3")),
            Err(ProfileError::UnknownKey("bogus".into()))
        );
        assert!(matches!(
            load_profile(Some("lm = ")),
            Err(ProfileError::Malformed(_))
        ));
        assert!(matches!(
            load_profile(Some("lm = \"ten\"")),
            Err(ProfileError::NotAnInteger { .. })
        ));
    }

    #[test]
    fn config_text_round_trips() {
        let mut p = ThresholdProfile::default();
        p.set(Smell::LTCE, 80);
        assert_eq!(load_profile(Some(&p.to_config_text())).unwrap(), p);
    }

    proptest! {
        #[test]
        fn flagged_iff_strictly_above(value in 0u64..200, threshold in 1u64..200) {
            let mut p = ThresholdProfile::default();
            p.set(Smell::LLF, threshold);
            let found = detect_entity(&metric(MetricKind::LambdaChars, value), &p, Path::new("p.py"));
            prop_assert_eq!(found.is_some(), value > threshold);
        }
    }
}

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::calendar::YearMonth;
use crate::corpus::ConceptName;
use crate::error::{Error, Result};
use crate::evaluate::EvalOptions;
use crate::gateway::GatewayConfig;
use crate::midas::MidasOptions;
use crate::signals::{GridConfig, SignalSpec};
use crate::synth::SynthConfig;

/// Complete run configuration, read from a TOML file (flat `key = value`
/// pairs under section headers). Relative paths resolve against the file's
/// directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; every stage derives its own stream from it by label.
    pub seed: u64,
    /// Output directory holding every stage's artifacts.
    pub out: PathBuf,
    /// Worker threads for parallel jobs, 0 for one per core.
    pub jobs: usize,
    pub corpus: CorpusConfig,
    pub classifier: ClassifierConfig,
    pub gateway: GatewayConfig,
    pub grid: GridConfig,
    pub signals: SignalsConfig,
    pub targets: Vec<TargetConfig>,
    pub competitors: Vec<CompetitorConfig>,
    pub sample: SampleConfig,
    pub midas: MidasOptions,
    pub evaluate: EvalOptions,
    pub accuracy: AccuracyConfig,
    pub synth: SynthSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            out: PathBuf::from("out"),
            jobs: 0,
            corpus: CorpusConfig::default(),
            classifier: ClassifierConfig::default(),
            gateway: GatewayConfig::default(),
            grid: GridConfig::default(),
            signals: SignalsConfig::default(),
            targets: Vec::new(),
            competitors: Vec::new(),
            sample: SampleConfig::default(),
            midas: MidasOptions::default(),
            evaluate: EvalOptions::default(),
            accuracy: AccuracyConfig::default(),
            synth: SynthSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    /// NDJSON submission dumps.
    pub submissions: Vec<PathBuf>,
    /// NDJSON comment dumps.
    pub comments: Vec<PathBuf>,
    pub concepts: Vec<ConceptName>,
    /// Append a submission's self text to its title.
    pub include_selftext: bool,
    /// Comments posted later than this after their submission are ignored.
    pub max_comment_lag_days: u32,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            submissions: Vec::new(),
            comments: Vec::new(),
            concepts: vec![ConceptName::Inflation, ConceptName::Unemployment],
            include_selftext: true,
            max_comment_lag_days: 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Dictionary,
    Llm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    /// `dictionary` or `llm`.
    pub kind: String,
    /// `term,polarity` CSV replacing the bundled dictionary.
    pub dictionary: Option<PathBuf>,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            kind: "dictionary".into(),
            dictionary: None,
        }
    }
}

impl ClassifierConfig {
    pub fn kind(&self) -> Result<ClassifierKind> {
        match self.kind.as_str() {
            "dictionary" => Ok(ClassifierKind::Dictionary),
            "llm" => Ok(ClassifierKind::Llm),
            other => Err(Error::Config(format!(
                "unknown classifier `{other}` (expected `dictionary` or `llm`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignalsConfig {
    /// First day of the daily series; defaults to the earliest submission.
    pub start: Option<NaiveDate>,
    /// Last day of the daily series; defaults to the latest submission.
    pub end: Option<NaiveDate>,
    /// Spec whose re-labeling is audited.
    pub audit_spec: String,
}

impl Default for SignalsConfig {
    fn default() -> Self {
        Self {
            start: None,
            end: None,
            audit_spec: "com_60_0.3_0_1".into(),
        }
    }
}

/// A monthly target (`month,value` CSV) nowcast with one concept's signals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub name: String,
    pub path: PathBuf,
    pub concept: ConceptName,
}

/// An external monthly series (`month,value` CSV) for correlation tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompetitorConfig {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub estimation_start: YearMonth,
    pub eval_start: YearMonth,
    pub eval_end: YearMonth,
    /// Information cutoffs in days before month end; the first one is reported.
    pub cutoffs: Vec<u32>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        let ym = |y, m| YearMonth::new(y, m).expect("valid month");
        Self {
            estimation_start: ym(2012, 1),
            eval_start: ym(2018, 1),
            eval_end: ym(2023, 12),
            cutoffs: vec![0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AccuracyConfig {
    /// `id,label` CSV of hand labels; ids refer to ingested posts.
    pub truth: Option<PathBuf>,
    pub concept: ConceptName,
    pub temperatures: Vec<f64>,
    pub repetitions: usize,
}

impl Default for AccuracyConfig {
    fn default() -> Self {
        Self {
            truth: None,
            concept: ConceptName::Inflation,
            temperatures: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            repetitions: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub corpus: SynthConfig,
    /// Target noise standard deviation.
    pub sigma_target: f64,
    /// Fixed loading of the target on the latent; when unset it follows
    /// from `variance_share`.
    pub loading: Option<f64>,
    pub variance_share: f64,
}

impl Default for SynthSection {
    fn default() -> Self {
        Self {
            corpus: SynthConfig::default(),
            sigma_target: 1.0,
            loading: None,
            variance_share: 0.5,
        }
    }
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file, resolving relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.resolve_paths(&base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        resolve(base, &mut self.out);
        self.corpus.submissions.iter_mut().for_each(|p| resolve(base, p));
        self.corpus.comments.iter_mut().for_each(|p| resolve(base, p));
        if let Some(p) = self.classifier.dictionary.as_mut() {
            resolve(base, p);
        }
        if let Some(p) = self.gateway.cache_path.as_mut() {
            resolve(base, p);
        }
        self.targets.iter_mut().for_each(|t| resolve(base, &mut t.path));
        self.competitors.iter_mut().for_each(|c| resolve(base, &mut c.path));
        if let Some(p) = self.accuracy.truth.as_mut() {
            resolve(base, p);
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks settings that every stage relies on.
    pub fn validate(&self) -> Result<()> {
        self.classifier.kind()?;
        if self.corpus.concepts.is_empty() {
            return Err(Error::Config("corpus.concepts is empty".into()));
        }
        self.midas.validate().map_err(|e| Error::Config(e.to_string()))?;
        let s = &self.sample;
        if s.eval_end < s.eval_start || s.eval_start <= s.estimation_start {
            return Err(Error::Config(format!(
                "sample: evaluation {}..{} must follow estimation start {}",
                s.eval_start, s.eval_end, s.estimation_start
            )));
        }
        if s.cutoffs.is_empty() || s.cutoffs.iter().any(|&c| c > 28) {
            return Err(Error::Config("sample.cutoffs must be non-empty with values in 0..=28".into()));
        }
        self.audit_spec()?;
        for t in &self.targets {
            if !self.corpus.concepts.contains(&t.concept) {
                return Err(Error::Config(format!(
                    "target {} uses concept {} which is not in corpus.concepts",
                    t.name, t.concept
                )));
            }
        }
        let mut names: Vec<&str> = self.targets.iter().map(|t| t.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("target names must be unique".into()));
        }
        if self.accuracy.repetitions == 0 || self.accuracy.temperatures.is_empty() {
            return Err(Error::Config("accuracy needs temperatures and at least one repetition".into()));
        }
        self.synth.corpus.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn audit_spec(&self) -> Result<SignalSpec> {
        self.signals
            .audit_spec
            .parse()
            .map_err(|e| Error::Config(format!("signals.audit_spec: {e}")))
    }
}

/// Fails with a configuration error naming each missing input file.
pub fn require_inputs<'a>(what: &str, paths: impl IntoIterator<Item = &'a PathBuf>) -> Result<()> {
    let missing: Vec<String> = paths
        .into_iter()
        .filter(|p| !p.exists())
        .map(|p| p.display().to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(format!("{what}: missing input {}", missing.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let back = RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_classifier_and_keys() {
        let cfg = RunConfig::from_toml("[classifier]\nkind = \"bert\"\n").unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        assert!(RunConfig::from_toml("nonsense = 1\n").is_err());
    }

    #[test]
    fn sections_parse() {
        let text = r#"
seed = 7
out = "run"

[corpus]
submissions = ["subs.ndjson"]
concepts = ["inflation"]

[sample]
estimation_start = "2016-05"
eval_start = "2019-01"
eval_end = "2023-12"
cutoffs = [0, 7]

[[targets]]
name = "hicp"
path = "hicp.csv"
concept = "inflation"
"#;
        let mut cfg = RunConfig::from_toml(text).unwrap();
        cfg.resolve_paths(Path::new("/base"));
        cfg.validate().unwrap();
        assert_eq!(cfg.out, PathBuf::from("/base/run"));
        assert_eq!(cfg.targets[0].path, PathBuf::from("/base/hicp.csv"));
        assert_eq!(cfg.sample.cutoffs, vec![0, 7]);
    }
}

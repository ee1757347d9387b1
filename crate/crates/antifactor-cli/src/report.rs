//! Report rendering. Two formats: plain text (minimal, line oriented) and
//! json-lines (one object per line, fields in declaration order). Counts are
//! exact decimal strings in both; witnesses are 1-indexed edge ids.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Debug, Serialize)]
pub struct CountReport {
    pub command: &'static str,
    pub mode: &'static str,
    pub algo: &'static str,
    pub width: usize,
    pub total: String,
    /// Nonzero entries only, as (size, exact decimal count).
    pub counts: Vec<(usize, String)>,
}

#[derive(Debug, Serialize)]
pub struct DecideReport {
    pub command: &'static str,
    pub mode: &'static str,
    pub algo: &'static str,
    pub width: usize,
    pub size: usize,
    pub answer: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct OptReport {
    pub command: &'static str,
    pub mode: &'static str,
    pub algo: &'static str,
    pub width: usize,
    /// The optimal size, or null when no size is feasible.
    pub answer: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

fn witness_line(ids: &[usize]) -> String {
    let mut line = String::from("witness");
    for e in ids {
        line.push(' ');
        line.push_str(&e.to_string());
    }
    line
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("report serialization cannot fail")
}

impl CountReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::JsonLines => to_json(self),
            Format::Text => {
                let mut out = String::new();
                for (s, c) in &self.counts {
                    out.push_str(&format!("{s} {c}\n"));
                }
                out.pop();
                out
            }
        }
    }
}

impl DecideReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::JsonLines => to_json(self),
            Format::Text => {
                let mut out = String::from(if self.answer { "yes" } else { "no" });
                if let Some(w) = &self.witness {
                    out.push('\n');
                    out.push_str(&witness_line(w));
                }
                out
            }
        }
    }
}

impl OptReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::JsonLines => to_json(self),
            Format::Text => {
                let mut out = match self.answer {
                    Some(s) => s.to_string(),
                    None => String::from("infeasible"),
                };
                if let Some(w) = &self.witness {
                    out.push('\n');
                    out.push_str(&witness_line(w));
                }
                out
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ApReport {
    pub len: usize,
    pub start: Option<u32>,
    pub diff: Option<u32>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub command: &'static str,
    pub ex: Vec<u32>,
    pub maxgap: u32,
    pub longest_ap: ApReport,
    pub tags: Vec<String>,
    /// Half-induced matching pairs, or null when none was derived.
    pub him: Option<Vec<(u32, u32)>>,
}

impl AnalyzeReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::JsonLines => to_json(self),
            Format::Text => {
                let mut out = String::new();
                out.push_str("ex:");
                for d in &self.ex {
                    out.push_str(&format!(" {d}"));
                }
                out.push('\n');
                out.push_str(&format!("maxgap: {}\n", self.maxgap));
                match (self.longest_ap.start, self.longest_ap.diff) {
                    (Some(a), Some(d)) => out.push_str(&format!(
                        "longest_ap: len={} start={a} diff={d}\n",
                        self.longest_ap.len
                    )),
                    _ => out.push_str(&format!("longest_ap: len={}\n", self.longest_ap.len)),
                }
                out.push_str(&format!("tags: {}\n", self.tags.join(" ")));
                match &self.him {
                    Some(pairs) => {
                        out.push_str(&format!("him_size: {}\n", pairs.len()));
                        for (a, b) in pairs {
                            out.push_str(&format!("({a}, {b})\n"));
                        }
                    }
                    None => out.push_str("him_size: 0\n"),
                }
                out.pop();
                out
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GenReport {
    pub command: &'static str,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraints: Option<String>,
}

impl GenReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::JsonLines => to_json(self),
            Format::Text => {
                let mut out = format!(
                    "family {}\nn {}\nm {}\nseed {}\ngraph {}",
                    self.family, self.n, self.m, self.seed, self.graph
                );
                if let Some(c) = &self.constraints {
                    out.push_str(&format!("\nconstraints {c}"));
                }
                out
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub command: &'static str,
    pub suite: &'static str,
    pub trials: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl SuiteReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::JsonLines => to_json(self),
            Format::Text => {
                if self.failures == 0 {
                    format!("{}: ok ({} trials)", self.suite, self.trials)
                } else {
                    let detail = self.detail.as_deref().unwrap_or("mismatch");
                    format!(
                        "{}: FAIL ({} of {} trials): {detail}",
                        self.suite, self.failures, self.trials
                    )
                }
            }
        }
    }
}

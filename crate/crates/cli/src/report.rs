use lict_core::Run;
use serde_json::json;

#[derive(Clone, Copy)]
pub enum Format {
    Text,
    Json,
}

/// The outcome of one command: a short result word, an exit code, and detail.
pub struct Report {
    pub result: &'static str,
    pub code: u8,
    detail: String,
    run: Option<Run>,
}

impl Report {
    pub fn new(result: &'static str, code: u8) -> Self {
        Report {
            result,
            code,
            detail: String::new(),
            run: None,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Report::new("error", 2).detail(message)
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    pub fn run(mut self, r: Run) -> Self {
        self.run = Some(r);
        self
    }

    pub fn print(&self, command: &str, format: Format) {
        match format {
            Format::Text => {
                println!("result={}", self.result);
                let mut text = self.detail.clone();
                if let Some(r) = &self.run {
                    text.push('\n');
                    text.push_str(r.to_string().trim_end());
                }
                if self.code == 2 || self.code == 4 {
                    eprintln!("{text}");
                } else if !text.is_empty() {
                    println!("{text}");
                }
            }
            Format::Json => {
                let mut obj =
                    json!({ "command": command, "result": self.result, "detail": self.detail });
                if let Some(r) = &self.run {
                    obj["counterexample"] = json!(r.to_string());
                }
                println!("{obj}");
            }
        }
    }
}

use std::fmt::Display;

/// A report: human-readable `key: value` lines followed by a trailer of
/// `key=value` lines between `#begin-machine` and `#end-machine`.
#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
    trailer: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn line(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.lines.push(format!("{key}: {value}"));
        self
    }

    pub fn text(&mut self, text: impl Display) -> &mut Self {
        self.lines.push(text.to_string());
        self
    }

    /// Record `key=value` in the trailer only.
    pub fn machine(&mut self, key: &str, value: impl Display) -> &mut Self {
        let v = value.to_string().replace('\n', " ");
        self.trailer.push((key.to_string(), v));
        self
    }

    /// Both a human line and a trailer entry.
    pub fn both(&mut self, key: &str, value: impl Display) -> &mut Self {
        let v = value.to_string();
        self.line(key, &v);
        self.machine(key, v)
    }

    pub fn render(&self, machine_only: bool) -> String {
        let mut out = String::new();
        if !machine_only {
            for l in &self.lines {
                out.push_str(l);
                out.push('\n');
            }
        }
        out.push_str("#begin-machine\n");
        for (k, v) in &self.trailer {
            out.push_str(&format!("{k}={v}\n"));
        }
        out.push_str("#end-machine\n");
        out
    }
}

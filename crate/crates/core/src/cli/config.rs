//! TOML run configuration. Keys are flag names (`-` or `_`), either at the
//! top level or inside a table named after the subcommand; the table wins.

use std::path::Path;

use toml::{Table, Value};

use super::CliError;

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    table: Table,
}

fn get_key<'a>(t: &'a Table, key: &str, alt: &str) -> Option<&'a Value> {
    t.get(key).or_else(|| t.get(alt))
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table = text.parse::<Table>().map_err(|e| CliError::Parse {
            line: e.span().map_or(1, |s| line_of(text, s.start)),
            message: e.message().to_string(),
        })?;
        Ok(Self { table })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn lookup(&self, section: &str, key: &str) -> Option<&Value> {
        let alt = key.replace('_', "-");
        let in_section = self.table.get(section).and_then(Value::as_table);
        // A subcommand table is not a value.
        in_section
            .and_then(|t| get_key(t, key, &alt))
            .or_else(|| get_key(&self.table, key, &alt).filter(|v| !v.is_table()))
    }

    pub fn f64(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        match self.lookup(section, key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(v) => Err(CliError::validation(key, format!("expected a number, got {v}"))),
        }
    }

    pub fn usize(&self, section: &str, key: &str) -> Result<Option<usize>, CliError> {
        match self.lookup(section, key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(v) => Err(CliError::validation(
                key,
                format!("expected a nonnegative integer, got {v}"),
            )),
        }
    }

    pub fn bool(&self, section: &str, key: &str) -> Result<Option<bool>, CliError> {
        match self.lookup(section, key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(v) => Err(CliError::validation(key, format!("expected a boolean, got {v}"))),
        }
    }

    pub fn string(&self, section: &str, key: &str) -> Result<Option<String>, CliError> {
        match self.lookup(section, key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(CliError::validation(key, format!("expected a string, got {v}"))),
        }
    }
}

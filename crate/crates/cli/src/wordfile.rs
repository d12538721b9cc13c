//! The text word file: one header line followed by one string per line.
//!
//! ```text
//! #sliced v1 mode=subst M=4 L=72 K=1 codec=none
//! 1111111111110100...
//! ```
//!
//! Body lines form an unordered set. Writers emit them in ascending order.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use sliced_core::{BitString, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Subst,
    Del,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Subst => "subst",
            Mode::Del => "del",
        })
    }
}

impl FromStr for Mode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "subst" => Ok(Mode::Subst),
            "del" => Ok(Mode::Del),
            _ => bail!("unknown mode {s:?}; expected subst or del"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub mode: Mode,
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub codec: String,
}

impl fmt::Display for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "#sliced v1 mode={} M={} L={} K={} codec={}",
            self.mode, self.m, self.l, self.k, self.codec
        )
    }
}

impl FromStr for Header {
    type Err = anyhow::Error;

    fn from_str(line: &str) -> anyhow::Result<Self> {
        let mut fields = line.split_whitespace();
        if fields.next() != Some("#sliced") || fields.next() != Some("v1") {
            bail!("header must start with \"#sliced v1\"");
        }
        let fields: Vec<&str> = fields.collect();
        if fields.len() != 5 {
            bail!("header needs exactly mode, M, L, K and codec");
        }
        let mut values = Vec::new();
        for (field, key) in fields.into_iter().zip(["mode", "M", "L", "K", "codec"]) {
            match field.split_once('=') {
                Some((k, v)) if k == key => values.push(v),
                _ => bail!("expected {key}=<value>, found {field:?}"),
            }
        }
        let int = |v: &str, key: &str| {
            v.parse::<usize>()
                .with_context(|| format!("{key}={v} is not an integer"))
        };
        Ok(Header {
            mode: values[0].parse()?,
            m: int(values[1], "M")?,
            l: int(values[2], "L")?,
            k: int(values[3], "K")?,
            codec: values[4].to_string(),
        })
    }
}

pub struct WordFile {
    pub header: Header,
    pub word: Word,
}

impl WordFile {
    pub fn render(&self) -> String {
        let mut out = self.header.to_string();
        out.push('\n');
        for s in self.word.strings().iter().rev() {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses and checks line lengths: exactly `L` in subst mode and within
    /// `L - K ..= L + K` in del mode.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut lines = text.lines();
        let header: Header = lines.next().context("empty word file")?.trim().parse()?;
        let (lo, hi) = match header.mode {
            Mode::Subst => (header.l, header.l),
            Mode::Del => (header.l.saturating_sub(header.k), header.l + header.k),
        };
        let mut strings = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let s: BitString = line
                .parse()
                .with_context(|| format!("body line {}", i + 1))?;
            if !(lo..=hi).contains(&s.len()) {
                bail!(
                    "body line {} has {} bits, expected {lo}..={hi}",
                    i + 1,
                    s.len()
                );
            }
            strings.push(s);
        }
        Ok(WordFile {
            header,
            word: Word::new(strings),
        })
    }
}

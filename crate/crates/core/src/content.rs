//! Dummy cell and body text.
//!
//! Numeric cells are N(0, 1) samples printed with three decimals, text cells
//! come from an order-1 Markov chain over the Lorem Ipsum passage, and dates
//! are uniform over every calendar day from 2000-01-01 to 2023-12-31.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::rng::SampleRng;
use crate::sampler::{ColumnType, TableSpec};

/// The classic placeholder passage the Markov chain is trained on.
pub const LOREM_IPSUM: &str = "Lorem ipsum dolor sit amet, consectetur adipiscing elit, sed do \
eiusmod tempor incididunt ut labore et dolore magna aliqua. Ut enim ad minim veniam, quis \
nostrud exercitation ullamco laboris nisi ut aliquip ex ea commodo consequat. Duis aute irure \
dolor in reprehenderit in voluptate velit esse cillum dolore eu fugiat nulla pariatur. \
Excepteur sint occaecat cupidatat non proident, sunt in culpa qui officia deserunt mollit anim \
id est laborum.";

/// Order-1 word chain. Transition weights are integer bigram counts, so
/// probabilities are exact ratios.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovModel {
    vocabulary: Vec<String>,
    /// Per word: (successor index, count), successors in first-seen order.
    transitions: Vec<Vec<(usize, u32)>>,
    totals: Vec<u32>,
}

impl MarkovModel {
    pub fn lorem_ipsum() -> Self {
        Self::from_corpus(LOREM_IPSUM).expect("embedded corpus is nonempty")
    }

    /// Builds the chain from lowercase alphabetic tokens of `corpus`. The last
    /// word links back to the first so every word has a successor. Returns
    /// `None` when the corpus has no words.
    pub fn from_corpus(corpus: &str) -> Option<Self> {
        let tokens: Vec<String> = corpus
            .split_whitespace()
            .map(|w| {
                w.chars()
                    .filter(char::is_ascii_alphabetic)
                    .map(|c| c.to_ascii_lowercase())
                    .collect::<String>()
            })
            .filter(|w| !w.is_empty())
            .collect();
        if tokens.is_empty() {
            return None;
        }
        let mut vocabulary: Vec<String> = Vec::new();
        let ids: Vec<usize> = tokens
            .iter()
            .map(|t| match vocabulary.iter().position(|v| v == t) {
                Some(i) => i,
                None => {
                    vocabulary.push(t.clone());
                    vocabulary.len() - 1
                }
            })
            .collect();
        let mut transitions = alloc::vec![Vec::<(usize, u32)>::new(); vocabulary.len()];
        for (k, &from) in ids.iter().enumerate() {
            let to = ids[(k + 1) % ids.len()];
            match transitions[from].iter_mut().find(|(s, _)| *s == to) {
                Some((_, count)) => *count += 1,
                None => transitions[from].push((to, 1)),
            }
        }
        let totals = transitions
            .iter()
            .map(|t| t.iter().map(|&(_, c)| c).sum())
            .collect();
        Some(MarkovModel {
            vocabulary,
            transitions,
            totals,
        })
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn order(&self) -> usize {
        1
    }

    fn id(&self, word: &str) -> Option<usize> {
        self.vocabulary.iter().position(|v| v == word)
    }

    /// Successors of `word` with their probabilities.
    pub fn successors(&self, word: &str) -> Vec<(&str, f64)> {
        let Some(i) = self.id(word) else {
            return Vec::new();
        };
        let total = f64::from(self.totals[i]);
        self.transitions[i]
            .iter()
            .map(|&(s, c)| (self.vocabulary[s].as_str(), f64::from(c) / total))
            .collect()
    }

    pub fn transition_probability(&self, from: &str, to: &str) -> f64 {
        self.successors(from)
            .into_iter()
            .find(|(w, _)| *w == to)
            .map_or(0.0, |(_, p)| p)
    }

    fn next_id(&self, rng: &mut SampleRng, current: usize) -> usize {
        let mut pick = rng.below(u64::from(self.totals[current])) as u32;
        for &(s, c) in &self.transitions[current] {
            if pick < c {
                return s;
            }
            pick -= c;
        }
        unreachable!("counts sum to the total")
    }

    fn words(&self, rng: &mut SampleRng, n_words: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n_words);
        if n_words == 0 {
            return out;
        }
        let mut current = rng.index(self.vocabulary.len());
        out.push(current);
        for _ in 1..n_words {
            current = self.next_id(rng, current);
            out.push(current);
        }
        out
    }
}

/// `n_words` space-separated words of Markov text. The first word is uniform
/// over the vocabulary; `n_words = 0` yields an empty string.
pub fn gen_text(rng: &mut SampleRng, model: &MarkovModel, n_words: usize) -> String {
    let mut out = String::new();
    for (k, id) in model.words(rng, n_words).into_iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        out.push_str(&model.vocabulary[id]);
    }
    out
}

/// Fixed cell formatting: three decimals, leading `-` for negatives, and no
/// negative zero.
pub fn format_numeric(value: f64) -> String {
    let mut s = String::new();
    let _ = write!(s, "{value:.3}");
    if s == "-0.000" {
        s.remove(0);
    }
    s
}

/// A standard normal sample (Box-Muller) formatted with [`format_numeric`].
pub fn gen_numeric(rng: &mut SampleRng) -> String {
    format_numeric(rng.standard_normal())
}

pub const FIRST_YEAR: i32 = 2000;
pub const LAST_YEAR: i32 = 2023;

pub const fn is_leap(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub const fn days_in_year(year: i32) -> u32 {
    if is_leap(year) {
        366
    } else {
        365
    }
}

pub const fn days_in_month(year: i32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(year) => 29,
        2 => 28,
        _ => 0,
    }
}

/// Number of calendar days in the date range (8766).
pub const fn date_range_days() -> u32 {
    let mut total = 0;
    let mut y = FIRST_YEAR;
    while y <= LAST_YEAR {
        total += days_in_year(y);
        y += 1;
    }
    total
}

/// Calendar date `offset` days after 2000-01-01.
pub fn date_from_offset(mut offset: u32) -> (i32, u32, u32) {
    let mut year = FIRST_YEAR;
    while offset >= days_in_year(year) {
        offset -= days_in_year(year);
        year += 1;
    }
    let mut month = 1;
    while offset >= days_in_month(year, month) {
        offset -= days_in_month(year, month);
        month += 1;
    }
    (year, month, offset + 1)
}

/// Parses `YYYY-MM-DD` and checks it is a real calendar date.
pub fn parse_date(s: &str) -> Option<(i32, u32, u32)> {
    let b = s.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return None;
    }
    let year: i32 = s[0..4].parse().ok()?;
    let month: u32 = s[5..7].parse().ok()?;
    let day: u32 = s[8..10].parse().ok()?;
    if !(1..=12).contains(&month) || day == 0 || day > days_in_month(year, month) {
        return None;
    }
    Some((year, month, day))
}

/// ISO-8601 date uniform over all days in [2000-01-01, 2023-12-31].
pub fn gen_date(rng: &mut SampleRng) -> String {
    let (y, m, d) = date_from_offset(rng.below(u64::from(date_range_days())) as u32);
    let mut s = String::with_capacity(10);
    let _ = write!(s, "{y:04}-{m:02}-{d:02}");
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContentConfig {
    pub text_words_min: u32,
    pub text_words_max: u32,
    pub header_words_max: u32,
}

impl Default for ContentConfig {
    fn default() -> Self {
        ContentConfig {
            text_words_min: 1,
            text_words_max: 3,
            header_words_max: 2,
        }
    }
}

impl ContentConfig {
    pub fn validate(&self) -> Result<(), crate::error::ConfigError> {
        if self.text_words_min == 0 || self.text_words_min > self.text_words_max {
            return Err(crate::error::ConfigError::Bounds {
                name: "text_words",
                min: self.text_words_min,
                max: self.text_words_max,
                floor: 1,
            });
        }
        if self.header_words_max == 0 {
            return Err(crate::error::ConfigError::Bounds {
                name: "header_words",
                min: 1,
                max: self.header_words_max,
                floor: 1,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TableContent {
    pub header: Vec<String>,
    /// `rows x cols`, row-major.
    pub body: Vec<Vec<String>>,
    pub cell_types: Vec<Vec<ColumnType>>,
}

impl TableContent {
    pub fn rows(&self) -> usize {
        self.body.len()
    }

    pub fn cols(&self) -> usize {
        self.header.len()
    }
}

fn capitalize(mut s: String) -> String {
    if let Some(first) = s.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    s
}

/// Fills a table: headers are 1 to `header_words_max` capitalized Markov
/// words, body cells follow their column's type. Cells are generated in
/// header order, then row-major.
pub fn populate_table(
    spec: &TableSpec,
    config: &ContentConfig,
    model: &MarkovModel,
    rng: &mut SampleRng,
) -> TableContent {
    let header = (0..spec.cols)
        .map(|_| {
            let n = rng.range_inclusive(1, config.header_words_max.max(1));
            capitalize(gen_text(rng, model, n as usize))
        })
        .collect();
    let mut body = Vec::with_capacity(spec.rows as usize);
    for _ in 0..spec.rows {
        let row = spec
            .column_types
            .iter()
            .map(|ty| match ty {
                ColumnType::Numeric => gen_numeric(rng),
                ColumnType::Date => gen_date(rng),
                ColumnType::Text => {
                    let n = rng.range_inclusive(config.text_words_min, config.text_words_max);
                    gen_text(rng, model, n as usize)
                }
            })
            .collect();
        body.push(row);
    }
    let cell_types = (0..spec.rows).map(|_| spec.column_types.clone()).collect();
    TableContent {
        header,
        body,
        cell_types,
    }
}

/// Body-text paragraphs. Each has a uniform word count in `words` and is
/// plain Markov text with a capitalized first word and a closing period.
pub fn gen_paragraphs(
    rng: &mut SampleRng,
    model: &MarkovModel,
    n_paragraphs: usize,
    words: (u32, u32),
) -> Vec<String> {
    (0..n_paragraphs)
        .map(|_| {
            let n = rng.range_inclusive(words.0.max(1), words.1.max(words.0.max(1)));
            let mut p = capitalize(gen_text(rng, model, n as usize));
            p.push('.');
            p
        })
        .collect()
}

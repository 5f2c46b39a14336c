//! Run configuration in the block format
//!
//! ```text
//! model {
//!     gram = [[0, 1], [1, 0]]
//!     endomorphism = [[0, 1], [0, 0]]
//!     f = "t^-2"
//!     interval = (0, inf)
//! }
//! deck {
//!     generator { q = 2  b = [[2, 0], [0, 1/2]] }
//! }
//! run { tasks = [verify, classify]  mode = exact  seed = 1 }
//! ```
//!
//! Blocks nest; `#` starts a comment. Values are rationals, quoted strings,
//! identifiers, open intervals `(lo, hi)` with `inf`, and `[...]` lists.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::model::{Bound, Interval, ModelData, ModelError, ProbeFlags};
use crate::scalar::{int, Mode, Rational, Scalar};
use crate::symmetry::{AffineMap, IsometryWitness, SymmetryError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("missing `{0}`")]
    Missing(String),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("invalid deck generator: {0}")]
    Deck(#[from] SymmetryError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(Rational),
    Str(String),
    Ident(String),
    Interval(Bound, Bound),
    List(Vec<Value>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(r) => write!(f, "{r}"),
            Value::Str(s) => write!(f, "\"{s}\""),
            Value::Ident(s) => write!(f, "{s}"),
            Value::Interval(a, b) => write!(f, "({a}, {b})"),
            Value::List(items) => {
                let parts: Vec<String> = items.iter().map(|v| v.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Pair { key: String, value: Value, line: usize },
    Block(Block),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Block {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Block {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().rev().find_map(|e| match e {
            Entry::Pair { key: k, value, .. } if k == key => Some(value),
            _ => None,
        })
    }

    pub fn blocks<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Block> + 'a {
        self.entries.iter().filter_map(move |e| match e {
            Entry::Block(b) if b.name == name => Some(b),
            _ => None,
        })
    }

    pub fn block<'a>(&'a self, name: &'a str) -> Option<&'a Block> {
        self.blocks(name).next()
    }

    fn keys_known(&self, known: &[&str]) -> Result<(), ConfigError> {
        for e in &self.entries {
            let (name, line) = match e {
                Entry::Pair { key, line, .. } => (key, *line),
                Entry::Block(b) => (&b.name, b.line),
            };
            if !known.contains(&name.as_str()) {
                return Err(ConfigError::Invalid(format!(
                    "line {line}: unknown key `{name}` in block `{}`",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(Rational),
    Str(String),
    Sym(char),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    line_start: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError::Parse {
            line: self.line,
            col: pos - self.line_start + 1,
            msg: msg.into(),
        })
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ConfigError> {
        let mut out = Vec::new();
        while let Some(&(pos, c)) = self.chars.peek() {
            let col = pos - self.line_start + 1;
            match c {
                '\n' => {
                    self.chars.next();
                    self.line += 1;
                    self.line_start = pos + 1;
                }
                c if c.is_whitespace() => {
                    self.chars.next();
                }
                '#' => {
                    while let Some(&(_, c)) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.chars.next();
                    }
                }
                '{' | '}' | '[' | ']' | '(' | ')' | '=' | ',' => {
                    self.chars.next();
                    out.push((Tok::Sym(c), self.line, col));
                }
                '"' => {
                    self.chars.next();
                    let start = pos + 1;
                    let mut end = None;
                    for (p, c) in self.chars.by_ref() {
                        if c == '"' {
                            end = Some(p);
                            break;
                        }
                        if c == '\n' {
                            break;
                        }
                    }
                    let Some(end) = end else {
                        return self.err(pos, "unterminated string");
                    };
                    out.push((Tok::Str(self.src[start..end].to_string()), self.line, col));
                }
                c if c.is_ascii_digit() || c == '-' || c == '+' => {
                    let start = pos;
                    self.chars.next();
                    let mut end = pos + c.len_utf8();
                    while let Some(&(p, c)) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '/' || c == '.' {
                            end = p + c.len_utf8();
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    let text = &self.src[start..end];
                    if text == "-inf" || text == "+inf" {
                        out.push((Tok::Ident(text.to_string()), self.line, col));
                        continue;
                    }
                    match parse_rational(text) {
                        Some(r) => out.push((Tok::Number(r), self.line, col)),
                        None => return self.err(start, format!("invalid number `{text}`")),
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = pos;
                    let mut end = pos;
                    while let Some(&(p, c)) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                            end = p + 1;
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Ident(self.src[start..end].to_string()), self.line, col));
                }
                other => return self.err(pos, format!("unexpected character `{other}`")),
            }
        }
        Ok(out)
    }
}

/// `a`, `a/b` or a decimal `a.b`, with optional sign.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: num::BigInt = n.parse().ok()?;
        let d: num::BigInt = d.parse().ok()?;
        if d == num::BigInt::from(0) {
            return None;
        }
        Rational::new(n, d)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: num::BigInt = format!("{whole}{frac}").parse().ok()?;
        Rational::new(digits, num::BigInt::from(10).pow(frac.len() as u32))
    } else {
        Rational::from_integer(body.parse().ok()?)
    };
    Some(if neg { -value } else { value })
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ConfigError> {
        let (line, col) = self
            .toks
            .get(self.pos)
            .or(self.toks.last())
            .map(|t| (t.1, t.2))
            .unwrap_or((1, 1));
        Err(ConfigError::Parse {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(0)
    }

    fn expect(&mut self, c: char) -> Result<(), ConfigError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn entries(&mut self, top: bool) -> Result<Vec<Entry>, ConfigError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None if top => return Ok(out),
                None => return self.err("unexpected end of input, expected `}`"),
                Some(Tok::Sym('}')) if !top => return Ok(out),
                Some(Tok::Ident(name)) => {
                    let name = name.clone();
                    let line = self.line();
                    self.pos += 1;
                    match self.peek() {
                        Some(Tok::Sym('{')) => {
                            self.pos += 1;
                            let entries = self.entries(false)?;
                            self.expect('}')?;
                            out.push(Entry::Block(Block { name, line, entries }));
                        }
                        Some(Tok::Sym('=')) => {
                            self.pos += 1;
                            let value = self.value()?;
                            out.push(Entry::Pair { key: name, value, line });
                        }
                        _ => return self.err(format!("expected `=` or `{{` after `{name}`")),
                    }
                }
                Some(_) => return self.err("expected a key or block name"),
            }
        }
    }

    fn bound(&mut self) -> Result<Bound, ConfigError> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Number(r)) => Ok(Bound::Finite(r)),
            Some(Tok::Ident(s)) if s == "inf" || s == "+inf" => Ok(Bound::PosInf),
            Some(Tok::Ident(s)) if s == "-inf" => Ok(Bound::NegInf),
            _ => {
                self.pos -= 1;
                self.err("expected a rational or `inf`")
            }
        }
    }

    fn value(&mut self) -> Result<Value, ConfigError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Number(r)) => {
                self.pos += 1;
                Ok(Value::Number(r))
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Value::Str(s))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Value::Ident(s))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let lo = self.bound()?;
                self.expect(',')?;
                let hi = self.bound()?;
                self.expect(')')?;
                Ok(Value::Interval(lo, hi))
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    if self.peek() == Some(&Tok::Sym(']')) {
                        self.pos += 1;
                        return Ok(Value::List(items));
                    }
                    items.push(self.value()?);
                    match self.peek() {
                        Some(Tok::Sym(',')) => self.pos += 1,
                        Some(Tok::Sym(']')) => {}
                        _ => return self.err("expected `,` or `]`"),
                    }
                }
            }
            _ => self.err("expected a value"),
        }
    }
}

/// Parses the block format into a root block named `config`.
pub fn parse_blocks(src: &str) -> Result<Block, ConfigError> {
    let lexer = Lexer {
        chars: src.char_indices().peekable(),
        src,
        line: 1,
        line_start: 0,
    };
    let toks = lexer.tokens()?;
    let mut parser = Parser { toks, pos: 0 };
    let entries = parser.entries(true)?;
    Ok(Block {
        name: "config".into(),
        line: 0,
        entries,
    })
}

fn number(v: &Value, what: &str) -> Result<Rational, ConfigError> {
    match v {
        Value::Number(r) => Ok(r.clone()),
        other => Err(ConfigError::Invalid(format!("`{what}` must be a rational, got {other}"))),
    }
}

fn count(v: &Value, what: &str) -> Result<usize, ConfigError> {
    let r = number(v, what)?;
    if !r.is_integer() || r < int(0) {
        return Err(ConfigError::Invalid(format!("`{what}` must be a nonnegative integer, got {r}")));
    }
    usize::try_from(r.to_integer()).map_err(|_| ConfigError::Invalid(format!("`{what}` is too large")))
}

fn flag(v: &Value, what: &str) -> Result<bool, ConfigError> {
    match v {
        Value::Ident(s) if s == "true" => Ok(true),
        Value::Ident(s) if s == "false" => Ok(false),
        other => Err(ConfigError::Invalid(format!("`{what}` must be true or false, got {other}"))),
    }
}

fn list<'a>(v: &'a Value, what: &str) -> Result<&'a [Value], ConfigError> {
    match v {
        Value::List(items) => Ok(items),
        other => Err(ConfigError::Invalid(format!("`{what}` must be a list, got {other}"))),
    }
}

fn rows(v: &Value, what: &str) -> Result<Vec<Vec<Rational>>, ConfigError> {
    list(v, what)?
        .iter()
        .map(|row| list(row, what)?.iter().map(|x| number(x, what)).collect())
        .collect()
}

fn matrix(v: &Value, what: &str) -> Result<Matrix<Rational>, ConfigError> {
    Matrix::from_rational_rows(&rows(v, what)?).map_err(|e| ConfigError::Invalid(format!("`{what}`: {e}")))
}

fn range(v: &Value, what: &str) -> Result<(Rational, Rational), ConfigError> {
    match v {
        Value::Interval(Bound::Finite(a), Bound::Finite(b)) if a < b => Ok((a.clone(), b.clone())),
        other => Err(ConfigError::Invalid(format!("`{what}` must be a finite range (lo, hi), got {other}"))),
    }
}

fn required<'a>(b: &'a Block, key: &str) -> Result<&'a Value, ConfigError> {
    b.get(key).ok_or_else(|| ConfigError::Missing(format!("{}.{key}", b.name)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Verify,
    Classify,
    Homogeneity,
    Holonomy,
    Functions,
    BasisDemo,
}

impl Task {
    pub const ALL: [Task; 6] = [
        Task::Verify,
        Task::Classify,
        Task::Homogeneity,
        Task::Holonomy,
        Task::Functions,
        Task::BasisDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Verify => "verify",
            Task::Classify => "classify",
            Task::Homogeneity => "homogeneity",
            Task::Holonomy => "holonomy",
            Task::Functions => "functions",
            Task::BasisDemo => "basis-demo",
        }
    }
}

impl FromStr for Task {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown task `{s}`")))
    }
}

/// Where chart sample points are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub points: usize,
    pub t: (Rational, Rational),
    pub s: (Rational, Rational),
    pub x: (Rational, Rational),
}

impl SampleSpec {
    /// A window well inside the interval.
    pub fn default_for(interval: &Interval) -> Self {
        let t = default_t_window(interval);
        Self {
            points: 6,
            t,
            s: (int(-1), int(1)),
            x: (int(-2), int(2)),
        }
    }
}

pub fn default_t_window(interval: &Interval) -> (Rational, Rational) {
    let half = Rational::new(1.into(), 2.into());
    match (interval.lo(), interval.hi()) {
        (Bound::Finite(a), Bound::Finite(b)) => {
            let w = (b.clone() - a) / int(8);
            (a.clone() + &w, b.clone() - w)
        }
        (Bound::Finite(a), _) => (a.clone() + &half, a.clone() + int(4)),
        (_, Bound::Finite(b)) => (b.clone() - int(4), b.clone() - half),
        _ => (int(-2), int(2)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolonomySpec {
    pub t0: Option<Rational>,
    pub max_word_length: usize,
    /// `(q, p)` pairs; when empty the deck generators are used.
    pub generators: Vec<AffineMap>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionsSpec {
    pub chi: Vec<String>,
    pub t0: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisSpec {
    Values(Vec<Vec<Rational>>),
    Random { m: usize, size: usize },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub name: String,
    pub model: ModelData,
    pub deck: Vec<IsometryWitness<Rational>>,
    pub tasks: Vec<Task>,
    pub mode: Mode,
    pub samples: SampleSpec,
    pub seed: u64,
    pub homogeneity_q: Vec<Rational>,
    pub holonomy: HolonomySpec,
    pub functions: FunctionsSpec,
    pub basis: BasisSpec,
}

fn interval_value(v: &Value) -> Result<Interval, ConfigError> {
    match v {
        Value::Interval(lo, hi) => Ok(Interval::new(lo.clone(), hi.clone())?),
        other => Err(ConfigError::Invalid(format!("`interval` must be (lo, hi), got {other}"))),
    }
}

fn model_block(b: &Block) -> Result<ModelData, ConfigError> {
    b.keys_known(&["gram", "endomorphism", "f", "interval", "locally_symmetric", "degenerate", "name"])?;
    let gram = matrix(required(b, "gram")?, "gram")?;
    let a = matrix(required(b, "endomorphism")?, "endomorphism")?;
    let f = match required(b, "f")? {
        Value::Str(s) => s.clone(),
        other => return Err(ConfigError::Invalid(format!("`f` must be a quoted expression, got {other}"))),
    };
    let interval = match b.get("interval") {
        Some(v) => interval_value(v)?,
        None => Interval::real_line(),
    };
    let probe = ProbeFlags {
        locally_symmetric: b.get("locally_symmetric").map(|v| flag(v, "locally_symmetric")).transpose()?.unwrap_or(false),
        degenerate: b.get("degenerate").map(|v| flag(v, "degenerate")).transpose()?.unwrap_or(false),
    };
    Ok(ModelData::new(gram, a, &f, interval, probe)?)
}

fn generator_block(b: &Block, model: &ModelData) -> Result<IsometryWitness<Rational>, ConfigError> {
    b.keys_known(&["q", "p", "c", "b"])?;
    let q = number(required(b, "q")?, "q")?;
    let p = b.get("p").map(|v| number(v, "p")).transpose()?.unwrap_or_else(|| int(0));
    let c = b.get("c").map(|v| number(v, "c")).transpose()?.unwrap_or_else(|| int(0));
    let dim = model.n() - 2;
    let bm = match b.get("b") {
        Some(v) => matrix(v, "b")?,
        None => Matrix::identity(dim),
    };
    Ok(IsometryWitness::new(model.gram(), q, p, c, bm)?)
}

impl RunConfig {
    pub fn parse(src: &str, default_name: &str) -> Result<Self, ConfigError> {
        let root = parse_blocks(src)?;
        root.keys_known(&["model", "deck", "run", "samples", "homogeneity", "holonomy", "functions", "basis"])?;
        let model_b = root.block("model").ok_or_else(|| ConfigError::Missing("model block".into()))?;
        let model = model_block(model_b)?;
        let name = match model_b.get("name") {
            Some(Value::Str(s)) | Some(Value::Ident(s)) => s.clone(),
            Some(other) => return Err(ConfigError::Invalid(format!("`name` must be a string, got {other}"))),
            None => default_name.to_string(),
        };
        let mut deck = Vec::new();
        if let Some(d) = root.block("deck") {
            d.keys_known(&["generator"])?;
            for g in d.blocks("generator") {
                deck.push(generator_block(g, &model)?);
            }
        }

        let empty = Block::default();
        let run = root.block("run").unwrap_or(&empty);
        run.keys_known(&["tasks", "mode", "seed"])?;
        let tasks = match run.get("tasks") {
            None => Task::ALL.to_vec(),
            Some(Value::Ident(s)) if s == "all" => Task::ALL.to_vec(),
            Some(v) => list(v, "tasks")?
                .iter()
                .map(|t| match t {
                    Value::Ident(s) => s.parse(),
                    other => Err(ConfigError::Invalid(format!("task must be a name, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let mode = match run.get("mode") {
            None => Mode::Exact,
            Some(Value::Ident(s)) => s.parse().map_err(ConfigError::Invalid)?,
            Some(other) => return Err(ConfigError::Invalid(format!("`mode` must be exact or float, got {other}"))),
        };
        let seed = match run.get("seed") {
            None => 0,
            Some(v) => count(v, "seed")? as u64,
        };

        let mut samples = SampleSpec::default_for(model.interval());
        if let Some(s) = root.block("samples") {
            s.keys_known(&["points", "t", "s", "x"])?;
            if let Some(v) = s.get("points") {
                samples.points = count(v, "points")?;
            }
            if let Some(v) = s.get("t") {
                samples.t = range(v, "t")?;
            }
            if let Some(v) = s.get("s") {
                samples.s = range(v, "s")?;
            }
            if let Some(v) = s.get("x") {
                samples.x = range(v, "x")?;
            }
        }
        for end in [&samples.t.0, &samples.t.1] {
            if !model.interval().closure_contains(end) {
                return Err(ConfigError::Invalid(format!(
                    "sample range for t ends at {end}, outside {}",
                    model.interval()
                )));
            }
        }

        let mut homogeneity_q = vec![Rational::new(1.into(), 2.into()), int(1), int(2), int(3)];
        if let Some(h) = root.block("homogeneity") {
            h.keys_known(&["q"])?;
            if let Some(v) = h.get("q") {
                homogeneity_q = list(v, "q")?.iter().map(|x| number(x, "q")).collect::<Result<_, _>>()?;
            }
        }

        let mut holonomy = HolonomySpec {
            t0: None,
            max_word_length: 6,
            generators: Vec::new(),
        };
        if let Some(h) = root.block("holonomy") {
            h.keys_known(&["t0", "max_word_length", "generators"])?;
            holonomy.t0 = h.get("t0").map(|v| number(v, "t0")).transpose()?;
            if let Some(v) = h.get("max_word_length") {
                holonomy.max_word_length = count(v, "max_word_length")?;
            }
            if let Some(v) = h.get("generators") {
                for pair in rows(v, "generators")? {
                    let [q, p] = <[Rational; 2]>::try_from(pair)
                        .map_err(|_| ConfigError::Invalid("holonomy generators are [q, p] pairs".into()))?;
                    if q.sign() <= 0 {
                        return Err(ConfigError::Invalid(format!("holonomy generator multiplier {q} must be positive")));
                    }
                    holonomy.generators.push(AffineMap::new(q, p));
                }
            }
        }

        let mut functions = FunctionsSpec {
            chi: vec!["t^-1".into()],
            t0: None,
        };
        if let Some(fb) = root.block("functions") {
            fb.keys_known(&["chi", "t0"])?;
            if let Some(v) = fb.get("chi") {
                functions.chi = list(v, "chi")?
                    .iter()
                    .map(|x| match x {
                        Value::Str(s) => Ok(s.clone()),
                        other => Err(ConfigError::Invalid(format!("`chi` entries must be quoted, got {other}"))),
                    })
                    .collect::<Result<_, _>>()?;
            }
            functions.t0 = fb.get("t0").map(|v| number(v, "t0")).transpose()?;
        }

        let mut basis = BasisSpec::Random { m: 3, size: 8 };
        if let Some(bb) = root.block("basis") {
            bb.keys_known(&["values", "m", "size"])?;
            if let Some(v) = bb.get("values") {
                basis = BasisSpec::Values(rows(v, "values")?);
            } else {
                let m = bb.get("m").map(|v| count(v, "m")).transpose()?.unwrap_or(3);
                let size = bb.get("size").map(|v| count(v, "size")).transpose()?.unwrap_or(8);
                if m == 0 || m > size {
                    return Err(ConfigError::Invalid(format!("basis needs 1 <= m <= size, got m = {m}, size = {size}")));
                }
                basis = BasisSpec::Random { m, size };
            }
        }

        Ok(Self {
            name,
            model,
            deck,
            tasks,
            mode,
            samples,
            seed,
            homogeneity_q,
            holonomy,
            functions,
            basis,
        })
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let src = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("config");
    RunConfig::parse(&src, stem)
}

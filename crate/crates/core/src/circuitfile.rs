//! Line-oriented description language for interferometer runs (`.qif`).
//!
//! One instruction per line, `name key=value ...`; `#` starts a comment and
//! blank lines are ignored. Numbers are plain decimals with an optional
//! exponent, in units of `W` (momenta) and radians (phases).
//!
//! ```text
//! source width=1 mean=0
//! bs t=0.85
//! kick path=B delta=0.2
//! phase path=B alpha=0
//! recombine
//! select port=C
//! report moments
//! ```
//!
//! Ordering rules: `source` comes first and only once; `bs` appears once,
//! before any `kick`/`phase`; `recombine` appears once, after `bs` and after
//! every `kick`/`phase`; `select` needs a preceding `recombine`; `report`
//! needs a preceding `select`.

use std::fmt::{self, Write as _};

use num_complex::Complex64;

use crate::error::Error;
use crate::interferometer::{
    port_stats, recombine, split, BeamSplitter, Path, Port, PortOutcome, TwoPathState,
};
use crate::wavepacket::{gaussian_init, GaussianParams, GridSpec, MomentumWavefunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Moments,
    Wavefunction,
    Conservation,
}

impl ReportKind {
    fn as_str(self) -> &'static str {
        match self {
            ReportKind::Moments => "moments",
            ReportKind::Wavefunction => "wavefunction",
            ReportKind::Conservation => "conservation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instruction {
    Source { width: f64, mean: f64 },
    BeamSplitter { t: f64 },
    Kick { path: Path, delta: f64 },
    Phase { path: Path, alpha: f64 },
    Recombine,
    Select { port: Port },
    Report { kind: ReportKind },
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Source { width, mean } => write!(f, "source width={width} mean={mean}"),
            Instruction::BeamSplitter { t } => write!(f, "bs t={t}"),
            Instruction::Kick { path, delta } => write!(f, "kick path={path} delta={delta}"),
            Instruction::Phase { path, alpha } => write!(f, "phase path={path} alpha={alpha}"),
            Instruction::Recombine => f.write_str("recombine"),
            Instruction::Select { port } => write!(f, "select port={port}"),
            Instruction::Report { kind } => write!(f, "report {}", kind.as_str()),
        }
    }
}

/// Parsed program. Equality compares instructions only, not source lines.
#[derive(Debug, Clone)]
pub struct CircuitProgram {
    instructions: Vec<Instruction>,
    lines: Vec<usize>,
}

impl PartialEq for CircuitProgram {
    fn eq(&self, other: &Self) -> bool {
        self.instructions == other.instructions
    }
}

impl CircuitProgram {
    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    /// 1-based source line of each instruction.
    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at '{}')", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in code.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((byte, col + 1)),
            (true, Some((b, c))) => {
                tokens.push(Token {
                    text: &code[b..byte],
                    column: c,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &code[b..],
            column: c,
        });
    }
    tokens
}

/// `[+-]? (digits [. digits*] | . digits) ([eE] [+-]? digits)?`
fn is_decimal(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}

struct LineParser<'a> {
    line: usize,
    args: Vec<(Token<'a>, Token<'a>)>,
}

impl<'a> LineParser<'a> {
    fn err(&self, tok: Token<'_>, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: tok.column,
            message: message.into(),
            token: tok.text.to_string(),
        }
    }

    fn new(line: usize, name: Token<'a>, rest: &[Token<'a>], allowed: &[&str]) -> Result<Self, ParseError> {
        let mut p = LineParser {
            line,
            args: Vec::new(),
        };
        for tok in rest {
            let Some(eq) = tok.text.find('=') else {
                return Err(p.err(*tok, "expected key=value"));
            };
            let key = Token {
                text: &tok.text[..eq],
                column: tok.column,
            };
            let value = Token {
                text: &tok.text[eq + 1..],
                column: tok.column + tok.text[..=eq].chars().count(),
            };
            if key.text.is_empty() {
                return Err(p.err(*tok, "expected key=value"));
            }
            if !allowed.contains(&key.text) {
                return Err(p.err(key, format!("unknown key '{}' for {}", key.text, name.text)));
            }
            if p.args.iter().any(|(k, _)| k.text == key.text) {
                return Err(p.err(key, format!("duplicate key '{}'", key.text)));
            }
            p.args.push((key, value));
        }
        // Missing keys are reported in declaration order.
        for key in allowed {
            if !p.args.iter().any(|(k, _)| k.text == *key) {
                return Err(p.err(name, format!("missing key '{key}' for {}", name.text)));
            }
        }
        Ok(p)
    }

    fn value(&self, key: &str) -> Token<'a> {
        self.args
            .iter()
            .find(|(k, _)| k.text == key)
            .expect("presence checked in new")
            .1
    }

    fn number(&mut self, key: &str) -> Result<f64, ParseError> {
        let tok = self.value(key);
        if !is_decimal(tok.text) {
            return Err(self.err(tok, format!("malformed number for '{key}'")));
        }
        let v: f64 = tok
            .text
            .parse()
            .map_err(|_| self.err(tok, format!("malformed number for '{key}'")))?;
        if !v.is_finite() {
            return Err(self.err(tok, format!("number out of range for '{key}'")));
        }
        Ok(v)
    }

    fn path(&mut self) -> Result<Path, ParseError> {
        let tok = self.value("path");
        match tok.text {
            "A" => Ok(Path::A),
            "B" => Ok(Path::B),
            _ => Err(self.err(tok, "path must be A or B")),
        }
    }

    fn port(&mut self) -> Result<Port, ParseError> {
        let tok = self.value("port");
        match tok.text {
            "C" => Ok(Port::C),
            "D" => Ok(Port::D),
            _ => Err(self.err(tok, "port must be C or D")),
        }
    }
}

fn parse_instruction(line: usize, tokens: &[Token<'_>]) -> Result<Instruction, ParseError> {
    let name = tokens[0];
    let rest = &tokens[1..];
    let err = |tok: Token<'_>, msg: String| ParseError {
        line,
        column: tok.column,
        message: msg,
        token: tok.text.to_string(),
    };
    match name.text {
        "source" => {
            let mut p = LineParser::new(line, name, rest, &["width", "mean"])?;
            let width = p.number("width")?;
            if width <= 0.0 {
                let tok = p.value("width");
                return Err(p.err(tok, "width must be positive"));
            }
            let mean = p.number("mean")?;
            Ok(Instruction::Source { width, mean })
        }
        "bs" => {
            let mut p = LineParser::new(line, name, rest, &["t"])?;
            let t = p.number("t")?;
            if !(0.0..=1.0).contains(&t) {
                let tok = p.value("t");
                return Err(p.err(tok, "t must be in [0, 1]"));
            }
            Ok(Instruction::BeamSplitter { t })
        }
        "kick" => {
            let mut p = LineParser::new(line, name, rest, &["path", "delta"])?;
            let path = p.path()?;
            let delta = p.number("delta")?;
            Ok(Instruction::Kick { path, delta })
        }
        "phase" => {
            let mut p = LineParser::new(line, name, rest, &["path", "alpha"])?;
            let path = p.path()?;
            let alpha = p.number("alpha")?;
            Ok(Instruction::Phase { path, alpha })
        }
        "recombine" => {
            LineParser::new(line, name, rest, &[])?;
            Ok(Instruction::Recombine)
        }
        "select" => {
            let mut p = LineParser::new(line, name, rest, &["port"])?;
            Ok(Instruction::Select { port: p.port()? })
        }
        "report" => {
            let Some(kind_tok) = rest.first() else {
                return Err(err(name, "report needs a kind (moments, wavefunction, conservation)".into()));
            };
            let kind = match kind_tok.text {
                "moments" => ReportKind::Moments,
                "wavefunction" => ReportKind::Wavefunction,
                "conservation" => ReportKind::Conservation,
                other => {
                    return Err(err(
                        *kind_tok,
                        format!("unknown report kind '{other}' (moments, wavefunction, conservation)"),
                    ))
                }
            };
            if let Some(extra) = rest.get(1) {
                return Err(err(*extra, "unexpected token after report kind".into()));
            }
            Ok(Instruction::Report { kind })
        }
        other => Err(err(name, format!("unknown instruction '{other}'"))),
    }
}

#[derive(Default)]
struct OrderState {
    source: bool,
    bs: bool,
    recombine: bool,
    select: bool,
}

impl OrderState {
    fn check(&mut self, instr: &Instruction) -> Result<(), &'static str> {
        if !self.source && !matches!(instr, Instruction::Source { .. }) {
            return Err("missing source");
        }
        match instr {
            Instruction::Source { .. } => {
                if self.source {
                    return Err("duplicate source");
                }
                self.source = true;
            }
            Instruction::BeamSplitter { .. } => {
                if self.bs {
                    return Err("duplicate bs");
                }
                if self.recombine {
                    return Err("bs after recombine");
                }
                self.bs = true;
            }
            Instruction::Kick { .. } | Instruction::Phase { .. } => {
                if !self.bs {
                    return Err("kick/phase before bs");
                }
                if self.recombine {
                    return Err("kick/phase after recombine");
                }
            }
            Instruction::Recombine => {
                if !self.bs {
                    return Err("recombine before bs");
                }
                if self.recombine {
                    return Err("duplicate recombine");
                }
                self.recombine = true;
            }
            Instruction::Select { .. } => {
                if !self.recombine {
                    return Err("select before recombine");
                }
                self.select = true;
            }
            Instruction::Report { .. } => {
                if !self.select {
                    return Err("report before select");
                }
            }
        }
        Ok(())
    }
}

pub fn parse(text: &str) -> Result<CircuitProgram, ParseError> {
    let mut instructions = Vec::new();
    let mut lines = Vec::new();
    let mut order = OrderState::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let instr = parse_instruction(line, &tokens)?;
        order.check(&instr).map_err(|msg| ParseError {
            line,
            column: tokens[0].column,
            message: msg.to_string(),
            token: tokens[0].text.to_string(),
        })?;
        instructions.push(instr);
        lines.push(line);
    }
    if instructions.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "missing source".into(),
            token: String::new(),
        });
    }
    Ok(CircuitProgram {
        instructions,
        lines,
    })
}

/// Canonical text form. Comments and blank lines are not preserved.
pub fn serialize(program: &CircuitProgram) -> String {
    let mut out = String::new();
    for instr in &program.instructions {
        writeln!(out, "{instr}").expect("writing to a String");
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReportEntry {
    Moments {
        line: usize,
        port: Port,
        probability: f64,
        mean: Option<f64>,
    },
    Conservation {
        line: usize,
        /// `P_C⟨p⟩_C + P_D⟨p⟩_D`
        weighted_sum: f64,
        /// Sum over arms of `norm × ⟨p⟩` before recombination.
        expected: f64,
        residual: f64,
        total_probability: f64,
    },
    Wavefunction {
        line: usize,
        port: Port,
        momenta: Vec<f64>,
        amplitudes: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub entries: Vec<ReportEntry>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecError {
    pub line: usize,
    pub error: Error,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl std::error::Error for ExecError {}

fn fmt_mean(mean: Option<f64>) -> String {
    mean.map_or_else(|| "undefined".to_string(), |m| format!("{m:.12}"))
}

/// Runs a program on `grid`.
pub fn execute(program: &CircuitProgram, grid: GridSpec) -> Result<Execution, ExecError> {
    let mut input: Option<MomentumWavefunction> = None;
    let mut inside: Option<TwoPathState> = None;
    let mut ports: Option<(PortOutcome, PortOutcome, f64)> = None;
    let mut selected: Option<Port> = None;
    let mut entries = Vec::new();
    let mut text = String::new();

    for (instr, &line) in program.instructions.iter().zip(&program.lines) {
        let fail = |error: Error| ExecError { line, error };
        match *instr {
            Instruction::Source { width, mean } => {
                let params = GaussianParams::new(width, mean).map_err(fail)?;
                input = Some(gaussian_init(params, grid).map_err(fail)?);
            }
            Instruction::BeamSplitter { t } => {
                let bs = BeamSplitter::new(t).map_err(fail)?;
                inside = Some(split(input.as_ref().expect("validated order"), &bs));
            }
            Instruction::Kick { path, delta } => {
                let state = inside.as_ref().expect("validated order");
                inside = Some(state.kick(path, delta).map_err(fail)?);
            }
            Instruction::Phase { path, alpha } => {
                let state = inside.as_ref().expect("validated order");
                inside = Some(state.phase(path, alpha));
            }
            Instruction::Recombine => {
                let state = inside.as_ref().expect("validated order");
                let (raw_c, raw_d) = recombine(state).map_err(fail)?;
                ports = Some((
                    port_stats(&raw_c, Port::C),
                    port_stats(&raw_d, Port::D),
                    state.weighted_mean_momentum(),
                ));
            }
            Instruction::Select { port } => selected = Some(port),
            Instruction::Report { kind } => {
                let (c, d, expected) = ports.as_ref().expect("validated order");
                let port = selected.expect("validated order");
                let outcome = if port == Port::C { c } else { d };
                match kind {
                    ReportKind::Moments => {
                        writeln!(
                            text,
                            "line {line}: port {port}  P = {:.12}  <p> = {}",
                            outcome.probability,
                            fmt_mean(outcome.mean_p)
                        )
                        .ok();
                        entries.push(ReportEntry::Moments {
                            line,
                            port,
                            probability: outcome.probability,
                            mean: outcome.mean_p,
                        });
                    }
                    ReportKind::Conservation => {
                        let weighted_sum = c.weighted_mean() + d.weighted_mean();
                        let residual = (weighted_sum - expected).abs();
                        let total_probability = c.probability + d.probability;
                        writeln!(
                            text,
                            "line {line}: conservation  P_C<p>_C + P_D<p>_D = {weighted_sum:.12}  \
                             expected = {expected:.12}  residual = {residual:.3e}  P_C + P_D = {total_probability:.12}"
                        )
                        .ok();
                        entries.push(ReportEntry::Conservation {
                            line,
                            weighted_sum,
                            expected: *expected,
                            residual,
                            total_probability,
                        });
                    }
                    ReportKind::Wavefunction => {
                        let wf = outcome.wavefunction.as_ref().ok_or(fail(Error::ZeroNorm))?;
                        writeln!(text, "line {line}: wavefunction at port {port} (p, re, im)").ok();
                        let momenta: Vec<f64> = wf.grid().momenta().collect();
                        for (p, a) in momenta.iter().zip(wf.amplitudes()) {
                            if a.norm_sqr() >= 1e-12 {
                                writeln!(text, "{p:.6} {:.12e} {:.12e}", a.re, a.im).ok();
                            }
                        }
                        entries.push(ReportEntry::Wavefunction {
                            line,
                            port,
                            momenta,
                            amplitudes: wf.amplitudes().to_vec(),
                        });
                    }
                }
            }
        }
    }
    Ok(Execution { entries, text })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CANONICAL: &str = "source width=1 mean=0\nbs t=0.85\nkick path=B delta=0.2\n\
                                        phase path=B alpha=0\nrecombine\nselect port=C\nreport moments";

    fn perr(text: &str) -> ParseError {
        parse(text).unwrap_err()
    }

    fn moments(exec: &Execution) -> Vec<(Port, f64, Option<f64>)> {
        exec.entries
            .iter()
            .filter_map(|e| match e {
                ReportEntry::Moments {
                    port,
                    probability,
                    mean,
                    ..
                } => Some((*port, *probability, *mean)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn canonical_program() {
        let prog = parse(CANONICAL).unwrap();
        assert_eq!(prog.len(), 7);
        assert_eq!(prog.lines(), &[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(
            prog.instructions()[2],
            Instruction::Kick {
                path: Path::B,
                delta: 0.2
            }
        );
        assert_eq!(prog.instructions()[6], Instruction::Report { kind: ReportKind::Moments });
    }

    #[test]
    fn decimal_grammar() {
        for ok in ["0", "1.", ".5", "-2.5e-3", "+1E7", "12.75"] {
            assert!(is_decimal(ok), "{ok}");
        }
        for bad in ["", ".", "-", "1e", "1e+", "nan", "inf", "1.2.3", "0x10", "1_0", "e5", "1e5.0"] {
            assert!(!is_decimal(bad), "{bad}");
        }
    }

    #[test]
    fn missing_source() {
        let e = perr("bs t=0.85");
        assert_eq!(e.line, 1);
        assert_eq!(e.message, "missing source");
        let e = perr("\n# nothing\n");
        assert_eq!(e.message, "missing source");
    }

    #[test]
    fn bad_path_points_at_token() {
        let e = perr("source width=1 mean=0\nbs t=0.5\nkick path=Q delta=0.2");
        assert_eq!(e.line, 3);
        assert_eq!(e.message, "path must be A or B");
        assert_eq!(e.column, 11);
        assert_eq!(e.token, "Q");
    }

    #[test]
    fn key_errors() {
        let head = "source width=1 mean=0\nbs t=0.5\n";
        let e = perr(&format!("{head}kick path=B delta=0.2 delta=0.3"));
        assert!(e.message.contains("duplicate key"));
        assert_eq!((e.line, e.column), (3, 23));
        let e = perr(&format!("{head}kick path=B"));
        assert!(e.message.contains("missing key 'delta'"));
        let e = perr(&format!("{head}kick path=B delta=0.2 speed=3"));
        assert!(e.message.contains("unknown key 'speed'"));
        let e = perr(&format!("{head}kick path=B delta"));
        assert_eq!(e.message, "expected key=value");
        let e = perr(&format!("{head}kick path=B delta=fast"));
        assert!(e.message.contains("malformed number"));
        assert_eq!(e.column, 19);
        let e = perr(&format!("{head}kick path=B delta=1e999"));
        assert!(e.message.contains("out of range"));
        let e = perr("source width=0 mean=0");
        assert!(e.message.contains("positive"));
        let e = perr("source width=1 mean=0\nbs t=1.5");
        assert!(e.message.contains("[0, 1]"));
        let e = perr("source width=1 mean=0\nwarp t=1");
        assert_eq!(e.message, "unknown instruction 'warp'");
        let e = perr("source width=1 mean=0\nbs t=0.5\nrecombine now=1");
        assert!(e.message.contains("unknown key"));
    }

    #[test]
    fn ordering_errors() {
        let cases = [
            ("source width=1 mean=0\nsource width=1 mean=0", 2, "duplicate source"),
            ("source width=1 mean=0\nkick path=B delta=0.1", 2, "kick/phase before bs"),
            ("source width=1 mean=0\nbs t=0.5\nrecombine\nkick path=B delta=0.1", 4, "kick/phase after recombine"),
            ("source width=1 mean=0\nbs t=0.5\nselect port=C", 3, "select before recombine"),
            ("source width=1 mean=0\nbs t=0.5\nrecombine\nreport moments", 4, "report before select"),
            ("source width=1 mean=0\nrecombine", 2, "recombine before bs"),
            ("source width=1 mean=0\nbs t=0.5\nbs t=0.5", 3, "duplicate bs"),
        ];
        for (text, line, msg) in cases {
            let e = perr(text);
            assert_eq!((e.line, e.message.as_str()), (line, msg), "{text}");
        }
    }

    #[test]
    fn report_kinds() {
        let head = "source width=1 mean=0\nbs t=0.5\nrecombine\nselect port=D\n";
        assert!(parse(&format!("{head}report conservation\nreport wavefunction")).is_ok());
        let e = perr(&format!("{head}report"));
        assert_eq!(e.line, 5);
        let e = perr(&format!("{head}report spectrum"));
        assert!(e.message.contains("unknown report kind"));
        let e = perr(&format!("{head}report moments extra"));
        assert!(e.message.contains("unexpected token"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nsource width=1 mean=0   # input\n  bs t=0.85\nrecombine\n";
        let prog = parse(text).unwrap();
        assert_eq!(prog.lines(), &[3, 4, 5]);
        let round = serialize(&prog);
        assert!(!round.contains('#'));
        assert_eq!(parse(&round).unwrap(), prog);
    }

    #[test]
    fn canonical_round_trip() {
        let prog = parse(CANONICAL).unwrap();
        let text = serialize(&prog);
        assert_eq!(text, format!("{CANONICAL}\n"));
        assert_eq!(parse(&text).unwrap(), prog);
    }

    #[test]
    fn execute_canonical() {
        let exec = execute(&parse(CANONICAL).unwrap(), GridSpec::default()).unwrap();
        let m = moments(&exec);
        assert_eq!(m.len(), 1);
        let (port, p, mean) = m[0];
        assert_eq!(port, Port::C);
        assert!((p - 0.0567).abs() < 1e-3);
        assert!((mean.unwrap() + 0.2925).abs() < 1e-3);
        assert!(exec.text.contains("port C"));
    }

    #[test]
    fn execute_zero_kick() {
        let text = CANONICAL.replace("delta=0.2", "delta=0");
        let exec = execute(&parse(&text).unwrap(), GridSpec::default()).unwrap();
        assert!(moments(&exec)[0].2.unwrap().abs() < 1e-12);
    }

    #[test]
    fn execute_pi_phase_exchanges_ports() {
        let flipped = CANONICAL.replace("alpha=0", "alpha=3.14159265");
        let c_flipped = moments(&execute(&parse(&flipped).unwrap(), GridSpec::default()).unwrap())[0];
        let port_d = CANONICAL.replace("port=C", "port=D");
        let d = moments(&execute(&parse(&port_d).unwrap(), GridSpec::default()).unwrap())[0];
        assert!((c_flipped.1 - d.1).abs() < 1e-6);
        assert!((c_flipped.2.unwrap() - d.2.unwrap()).abs() < 1e-6);
    }

    #[test]
    fn execute_conservation_and_wavefunction() {
        let text = format!("{CANONICAL}\nreport conservation\nselect port=D\nreport wavefunction");
        let exec = execute(&parse(&text).unwrap(), GridSpec::default()).unwrap();
        let mut saw = (false, false);
        for e in &exec.entries {
            match e {
                ReportEntry::Conservation {
                    residual,
                    expected,
                    total_probability,
                    ..
                } => {
                    assert!(*residual < 1e-8);
                    assert!((expected - 0.2775 * 0.2).abs() < 1e-10);
                    assert!((total_probability - 1.0).abs() < 1e-9);
                    saw.0 = true;
                }
                ReportEntry::Wavefunction { port, amplitudes, line, .. } => {
                    assert_eq!(*port, Port::D);
                    assert_eq!(*line, 10);
                    assert_eq!(amplitudes.len(), 4096);
                    saw.1 = true;
                }
                _ => {}
            }
        }
        assert_eq!(saw, (true, true));
    }

    #[test]
    fn runtime_errors_carry_lines() {
        let text = CANONICAL.replace("delta=0.2", "delta=9");
        let err = execute(&parse(&text).unwrap(), GridSpec::default()).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matches!(err.error, Error::Aliasing { .. }));

        let dark = "source width=1 mean=0\nbs t=0.7071067811865476\nrecombine\nselect port=C\nreport wavefunction";
        let err = execute(&parse(dark).unwrap(), GridSpec::default()).unwrap_err();
        assert_eq!((err.line, err.error.clone()), (5, Error::ZeroNorm));

        let narrow = "source width=1 mean=12\nbs t=0.5";
        let err = execute(&parse(narrow).unwrap(), GridSpec::default()).unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn execution_is_deterministic() {
        let prog = parse(CANONICAL).unwrap();
        let a = execute(&prog, GridSpec::default()).unwrap();
        let b = execute(&prog, GridSpec::default()).unwrap();
        assert_eq!(a, b);
    }
}

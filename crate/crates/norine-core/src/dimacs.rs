//! DIMACS CNF reading and writing.
//!
//! Output conventions: comment lines first (`c ...`), one `p cnf V C`
//! header, then one clause per line, literals separated by single spaces and
//! terminated by ` 0`. Lines end with `\n` and carry no trailing whitespace.
//! Writing the same instance always produces identical bytes.
//!
//! The parser accepts the format liberally enough for solver interchange
//! (clauses may span lines, `%` ends the file) but is otherwise strict:
//! the header is mandatory, literals must stay within the declared variable
//! range, the clause count must match the header, and clauses must be
//! non-empty with no repeated variable.

use std::io::{self, BufRead, Write};

use crate::cnf::{CnfInstance, Lit};
use crate::error::{Error, Result};

const FLUSH_THRESHOLD: usize = 1 << 16;

/// Buffered byte-level DIMACS emitter shared by [`write_dimacs`] and the
/// streaming encoder paths.
pub(crate) struct DimacsWriter<W: Write> {
    sink: W,
    buf: Vec<u8>,
}

impl<W: Write> DimacsWriter<W> {
    pub fn new(sink: W) -> Self {
        DimacsWriter {
            sink,
            buf: Vec::with_capacity(2 * FLUSH_THRESHOLD),
        }
    }

    pub fn comment(&mut self, text: &str) -> io::Result<()> {
        if text.is_empty() {
            self.buf.extend_from_slice(b"c\n");
        } else {
            self.buf.push(b'c');
            self.buf.push(b' ');
            self.buf.extend_from_slice(text.as_bytes());
            self.buf.push(b'\n');
        }
        self.maybe_flush()
    }

    pub fn header(&mut self, num_vars: u32, num_clauses: u64) -> io::Result<()> {
        self.buf.extend_from_slice(b"p cnf ");
        push_int(&mut self.buf, num_vars as i64);
        self.buf.push(b' ');
        push_int(&mut self.buf, num_clauses as i64);
        self.buf.push(b'\n');
        self.maybe_flush()
    }

    pub fn clause(&mut self, lits: &[Lit]) -> io::Result<()> {
        for l in lits {
            push_int(&mut self.buf, l.to_dimacs() as i64);
            self.buf.push(b' ');
        }
        self.buf.extend_from_slice(b"0\n");
        self.maybe_flush()
    }

    fn maybe_flush(&mut self) -> io::Result<()> {
        if self.buf.len() >= FLUSH_THRESHOLD {
            self.sink.write_all(&self.buf)?;
            self.buf.clear();
        }
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.sink.write_all(&self.buf)?;
        self.sink.flush()?;
        Ok(self.sink)
    }
}

fn push_int(buf: &mut Vec<u8>, v: i64) {
    let mut v = v;
    if v < 0 {
        buf.push(b'-');
        v = -v;
    }
    let mut digits = [0u8; 20];
    let mut i = digits.len();
    loop {
        i -= 1;
        digits[i] = b'0' + (v % 10) as u8;
        v /= 10;
        if v == 0 {
            break;
        }
    }
    buf.extend_from_slice(&digits[i..]);
}

/// Serializes `inst` in DIMACS form. Byte-for-byte deterministic.
pub fn write_dimacs<W: Write>(inst: &CnfInstance, sink: W) -> io::Result<()> {
    let mut w = DimacsWriter::new(sink);
    for c in inst.comments() {
        w.comment(c)?;
    }
    w.header(inst.num_vars(), inst.num_clauses() as u64)?;
    for clause in inst.clauses() {
        w.clause(clause)?;
    }
    w.finish()?;
    Ok(())
}

/// Parses a DIMACS CNF file. Comment lines are preserved in order.
pub fn read_dimacs<R: BufRead>(mut src: R) -> Result<CnfInstance> {
    let mut line = String::new();
    let mut line_no = 0usize;
    let mut header: Option<(u32, u64)> = None;
    let mut inst = CnfInstance::new(0);
    let mut clause: Vec<Lit> = Vec::new();
    let mut clauses_read = 0u64;

    let err = |line_no: usize, msg: String| Error::Parse { line: line_no, msg };

    loop {
        line.clear();
        if src.read_line(&mut line)? == 0 {
            break;
        }
        line_no += 1;
        let text = line.trim_end_matches(['\n', '\r']);
        if text.trim_start().is_empty() {
            continue;
        }
        if let Some(body) = text.strip_prefix('c') {
            inst.push_comment(body.strip_prefix(' ').unwrap_or(body));
            continue;
        }
        if text.starts_with('%') {
            // legacy end-of-file marker; everything after is ignored
            break;
        }
        if text.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate header".into()));
            }
            let parts: Vec<&str> = text.split_ascii_whitespace().collect();
            let bad = || err(line_no, format!("malformed header {text:?}"));
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad());
            }
            let num_vars: u32 = parts[2].parse().map_err(|_| bad())?;
            let num_clauses: u64 = parts[3].parse().map_err(|_| bad())?;
            let mut fresh = CnfInstance::new(num_vars);
            for c in inst.comments() {
                fresh.push_comment(c.clone());
            }
            inst = fresh;
            header = Some((num_vars, num_clauses));
            continue;
        }

        let Some((num_vars, _)) = header else {
            return Err(err(line_no, format!("clause data before header: {text:?}")));
        };
        for tok in text.split_ascii_whitespace() {
            let code: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("bad literal token {tok:?}")))?;
            if code == 0 {
                if clause.is_empty() {
                    return Err(err(line_no, "empty clause".into()));
                }
                if let Some(l) = duplicate_var(&clause) {
                    return Err(err(line_no, format!("variable {l} repeats in clause")));
                }
                inst.push_lits(&clause);
                clause.clear();
                clauses_read += 1;
            } else {
                if code.unsigned_abs() > num_vars as u64 {
                    return Err(err(
                        line_no,
                        format!("literal {code} outside declared {num_vars} variables"),
                    ));
                }
                clause.push(Lit::from_dimacs(code as i32)?);
            }
        }
    }

    let Some((_, num_clauses)) = header else {
        return Err(err(line_no, "missing p cnf header".into()));
    };
    if !clause.is_empty() {
        return Err(err(line_no, "unterminated clause at end of file".into()));
    }
    if clauses_read != num_clauses {
        return Err(err(
            line_no,
            format!("header declares {num_clauses} clauses, found {clauses_read}"),
        ));
    }
    Ok(inst)
}

fn duplicate_var(lits: &[Lit]) -> Option<u32> {
    // clauses here are short; quadratic scan beats hashing
    for (i, a) in lits.iter().enumerate() {
        if lits[..i].iter().any(|b| b.var() == a.var()) {
            return Some(a.var());
        }
    }
    None
}

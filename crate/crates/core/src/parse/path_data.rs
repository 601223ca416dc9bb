//! Parser for the path `d` attribute.
//!
//! Implements the SVG 1.1 grammar: all ten command letters in either case,
//! implicit repetition (with `M` repeating as `L`), single-digit arc flags,
//! and comma-or-whitespace separators.

use crate::geometry::Point;
use crate::model::{PathCommand, PathOp};

#[derive(Debug, Clone, PartialEq)]
pub struct PathDataError {
    /// Index of the command that failed; commands before it parsed cleanly.
    pub command_index: usize,
    /// Byte offset into the `d` string.
    pub offset: usize,
    pub message: String,
}

pub fn parse_path_data(d: &str) -> Result<Vec<PathCommand>, PathDataError> {
    let mut scanner = Scanner::new(d);
    scanner.run()?;
    Ok(scanner.commands)
}

/// Parses as far as possible and returns the commands together with the
/// byte length of the longest prefix that is itself a valid `d` string.
/// Used by repair to drop a trailing incomplete command tuple.
pub fn longest_valid_prefix(d: &str) -> (Vec<PathCommand>, usize) {
    let mut scanner = Scanner::new(d);
    let _ = scanner.run();
    (scanner.commands, scanner.valid_end)
}

struct Scanner<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
    commands: Vec<PathCommand>,
    /// End of the last complete command tuple.
    valid_end: usize,
}

fn is_ws(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\r' | b'\n')
}

impl<'a> Scanner<'a> {
    fn new(d: &'a str) -> Scanner<'a> {
        Scanner { bytes: d.as_bytes(), text: d, pos: 0, commands: Vec::new(), valid_end: 0 }
    }

    fn err(&self, message: impl Into<String>) -> PathDataError {
        PathDataError {
            command_index: self.commands.len(),
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && is_ws(self.bytes[self.pos]) {
            self.pos += 1;
        }
    }

    /// comma-wsp: whitespace with at most one comma.
    fn skip_sep(&mut self) {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b',' {
            self.pos += 1;
            self.skip_ws();
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<f64, PathDataError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let int_digits = self.eat_digits();
        let mut frac_digits = 0;
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac_digits = self.eat_digits();
        }
        if int_digits == 0 && frac_digits == 0 {
            self.pos = start;
            return Err(self.err("expected a number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let exp_mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.eat_digits() == 0 {
                // "1e" with no exponent digits: the 'e' is not part of the
                // number, and since 'e' is not a command letter the overall
                // parse will fail right after. Restore and let it.
                self.pos = exp_mark;
            }
        }
        let token = &self.text[start..self.pos];
        let value: f64 = token.parse().map_err(|_| self.err(format!("bad number `{token}`")))?;
        if !value.is_finite() {
            return Err(self.err(format!("number `{token}` overflows")));
        }
        Ok(value)
    }

    fn eat_digits(&mut self) -> usize {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn flag(&mut self) -> Result<bool, PathDataError> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(false)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(self.err("expected arc flag 0 or 1")),
        }
    }

    fn pair(&mut self) -> Result<Point, PathDataError> {
        let x = self.number()?;
        self.skip_sep();
        let y = self.number()?;
        Ok(Point::new(x, y))
    }

    fn run(&mut self) -> Result<(), PathDataError> {
        self.skip_ws();
        self.valid_end = self.pos;
        if self.pos >= self.bytes.len() {
            return Ok(());
        }
        let first = self.peek().unwrap();
        if first != b'M' && first != b'm' {
            return Err(self.err("path data must start with a move command"));
        }
        let mut letter = first;
        self.pos += 1;
        loop {
            self.skip_ws();
            let op = self.tuple(letter)?;
            let relative = letter.is_ascii_lowercase();
            self.commands.push(PathCommand { relative, op });
            self.valid_end = self.pos;
            self.skip_sep();
            match self.peek() {
                None => return Ok(()),
                Some(b) if b.is_ascii_alphabetic() => {
                    if !matches!(
                        b.to_ascii_uppercase(),
                        b'M' | b'L' | b'H' | b'V' | b'C' | b'S' | b'Q' | b'T' | b'A' | b'Z'
                    ) {
                        return Err(self.err(format!("unknown command `{}`", b as char)));
                    }
                    letter = b;
                    self.pos += 1;
                }
                Some(_) => {
                    // Implicit repetition; a move repeats as a line.
                    letter = match letter {
                        b'M' => b'L',
                        b'm' => b'l',
                        b'Z' | b'z' => {
                            return Err(self.err("coordinates after a close command"));
                        }
                        other => other,
                    };
                }
            }
        }
    }

    fn tuple(&mut self, letter: u8) -> Result<PathOp, PathDataError> {
        Ok(match letter.to_ascii_uppercase() {
            b'M' => PathOp::Move { to: self.pair()? },
            b'L' => PathOp::Line { to: self.pair()? },
            b'H' => PathOp::HLine { x: self.number()? },
            b'V' => PathOp::VLine { y: self.number()? },
            b'C' => {
                let c1 = self.pair()?;
                self.skip_sep();
                let c2 = self.pair()?;
                self.skip_sep();
                let to = self.pair()?;
                PathOp::Cubic { c1, c2, to }
            }
            b'S' => {
                let c2 = self.pair()?;
                self.skip_sep();
                let to = self.pair()?;
                PathOp::SmoothCubic { c2, to }
            }
            b'Q' => {
                let c = self.pair()?;
                self.skip_sep();
                let to = self.pair()?;
                PathOp::Quad { c, to }
            }
            b'T' => PathOp::SmoothQuad { to: self.pair()? },
            b'A' => {
                let rx = self.number()?;
                self.skip_sep();
                let ry = self.number()?;
                self.skip_sep();
                let x_rotation = self.number()?;
                self.skip_sep();
                let large_arc = self.flag()?;
                self.skip_sep();
                let sweep = self.flag()?;
                self.skip_sep();
                let to = self.pair()?;
                PathOp::Arc { rx, ry, x_rotation, large_arc, sweep, to }
            }
            b'Z' => PathOp::Close,
            _ => unreachable!("letter validated by caller"),
        })
    }
}

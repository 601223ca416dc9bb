//! Minimal XML tokenizer for the SVG subset.
//!
//! One scanner serves both the strict parser and the repairer: errors carry
//! enough position information that repair can salvage the valid part of a
//! truncated tag. All structural delimiters are ASCII, so byte scanning is
//! UTF-8 safe.

use std::borrow::Cow;
use std::ops::Range;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Attr<'a> {
    pub name: &'a str,
    /// Entity-decoded value.
    pub value: Cow<'a, str>,
    /// Raw bytes of the value between (not including) its quotes.
    pub value_span: Range<usize>,
    pub name_start: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct StartTag<'a> {
    pub name: &'a str,
    pub attrs: Vec<Attr<'a>>,
    pub self_closing: bool,
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Event<'a> {
    Start(StartTag<'a>),
    End { name: &'a str, start: usize },
    /// Character data; the parser ignores it.
    Text,
    /// Comment, processing instruction, doctype, or CDATA; ignored.
    Misc,
    Eof,
}

/// EOF landed inside a start tag. `keep_end` marks how many bytes of the
/// tag are salvageable: everything from the last complete attribute (or the
/// tag name) onward is dropped by repair.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TruncatedStart<'a> {
    pub start: usize,
    /// `None` when not even a tag name was read (a bare `<` at EOF).
    pub name: Option<&'a str>,
    pub attrs: Vec<Attr<'a>>,
    pub keep_end: usize,
    /// Set when EOF hit inside a quoted attribute value: the attribute
    /// name and the span of the partial raw value (which runs to EOF).
    pub open_value: Option<(&'a str, Range<usize>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum ScanError<'a> {
    TruncatedStart(TruncatedStart<'a>),
    /// EOF inside an end tag, comment, CDATA, doctype, or PI.
    TruncatedOther { start: usize },
    /// Structurally invalid markup. `resume` is where scanning could
    /// continue after cutting the bogus span.
    Bogus { start: usize, resume: usize, message: String },
}

impl ScanError<'_> {
    pub(crate) fn offset(&self) -> usize {
        match self {
            ScanError::TruncatedStart(t) => t.start,
            ScanError::TruncatedOther { start } => *start,
            ScanError::Bogus { start, .. } => *start,
        }
    }

    pub(crate) fn message(&self) -> String {
        match self {
            ScanError::TruncatedStart(_) => "unterminated start tag".to_string(),
            ScanError::TruncatedOther { .. } => "unterminated markup".to_string(),
            ScanError::Bogus { message, .. } => message.clone(),
        }
    }
}

pub(crate) struct Tokenizer<'a> {
    text: &'a str,
    pos: usize,
}

fn is_ws(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\r' | b'\n')
}

fn is_name_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_' || b == b':'
}

fn is_name_char(b: u8) -> bool {
    is_name_start(b) || b.is_ascii_digit() || b == b'-' || b == b'.'
}

impl<'a> Tokenizer<'a> {
    pub(crate) fn new(text: &'a str, pos: usize) -> Tokenizer<'a> {
        Tokenizer { text, pos }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    fn bytes(&self) -> &'a [u8] {
        self.text.as_bytes()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    /// Advances past the next syntactic unit and classifies it.
    pub(crate) fn next_event(&mut self) -> Result<Event<'a>, ScanError<'a>> {
        let bytes = self.bytes();
        if self.at_end() {
            return Ok(Event::Eof);
        }
        if bytes[self.pos] != b'<' {
            while !self.at_end() && bytes[self.pos] != b'<' {
                self.pos += 1;
            }
            return Ok(Event::Text);
        }

        let start = self.pos;
        let rest = &bytes[start..];
        if rest.starts_with(b"<!--") {
            return self.scan_until(start, b"-->").map(|_| Event::Misc);
        }
        if rest.starts_with(b"<![CDATA[") {
            return self.scan_until(start, b"]]>").map(|_| Event::Misc);
        }
        if rest.starts_with(b"<!") || rest.starts_with(b"<?") {
            // Doctype or processing instruction; internal subsets are out
            // of scope, a plain '>' terminates.
            let close = if rest.starts_with(b"<?") { b"?>" as &[u8] } else { b">" };
            return self.scan_until(start, close).map(|_| Event::Misc);
        }
        if rest.starts_with(b"</") {
            return self.scan_end_tag(start);
        }
        if rest.len() >= 2 && is_name_start(rest[1]) {
            return self.scan_start_tag(start);
        }
        if rest.len() == 1 {
            // Lone '<' at EOF.
            self.pos = self.text.len();
            return Err(ScanError::TruncatedStart(TruncatedStart {
                start,
                name: None,
                attrs: Vec::new(),
                keep_end: start,
                open_value: None,
            }));
        }
        // '<' followed by junk.
        let resume = self.find_resume(start + 1);
        self.pos = resume;
        Err(ScanError::Bogus {
            start,
            resume,
            message: "invalid markup after '<'".to_string(),
        })
    }

    /// Bogus markup recovery point: just past the next '>', or at the next
    /// '<', whichever comes first.
    fn find_resume(&self, from: usize) -> usize {
        let bytes = self.bytes();
        let mut i = from;
        while i < bytes.len() {
            match bytes[i] {
                b'>' => return i + 1,
                b'<' => return i,
                _ => i += 1,
            }
        }
        bytes.len()
    }

    fn scan_until(&mut self, start: usize, close: &[u8]) -> Result<(), ScanError<'a>> {
        let bytes = self.bytes();
        let mut i = start;
        while i + close.len() <= bytes.len() {
            if &bytes[i..i + close.len()] == close {
                self.pos = i + close.len();
                return Ok(());
            }
            i += 1;
        }
        self.pos = self.text.len();
        Err(ScanError::TruncatedOther { start })
    }

    fn scan_end_tag(&mut self, start: usize) -> Result<Event<'a>, ScanError<'a>> {
        let bytes = self.bytes();
        let mut i = start + 2;
        let name_start = i;
        while i < bytes.len() && is_name_char(bytes[i]) {
            i += 1;
        }
        let name = &self.text[name_start..i];
        while i < bytes.len() && is_ws(bytes[i]) {
            i += 1;
        }
        if i >= bytes.len() {
            self.pos = bytes.len();
            return Err(ScanError::TruncatedOther { start });
        }
        if bytes[i] != b'>' || name.is_empty() {
            let resume = self.find_resume(start + 2);
            self.pos = resume;
            return Err(ScanError::Bogus {
                start,
                resume,
                message: "malformed end tag".to_string(),
            });
        }
        self.pos = i + 1;
        Ok(Event::End { name, start })
    }

    fn scan_start_tag(&mut self, start: usize) -> Result<Event<'a>, ScanError<'a>> {
        let bytes = self.bytes();
        let mut i = start + 1;
        let name_start = i;
        while i < bytes.len() && is_name_char(bytes[i]) {
            i += 1;
        }
        let name = &self.text[name_start..i];
        let mut attrs: Vec<Attr<'a>> = Vec::new();
        // EOF immediately after name characters: the tag is kept and
        // self-closed by repair. The name may itself be cut short, but the
        // result still parses (unknown elements are skipped with a warning).
        let truncated = |attrs: Vec<Attr<'a>>, keep_end: usize,
                         open_value: Option<(&'a str, Range<usize>)>| {
            Err(ScanError::TruncatedStart(TruncatedStart {
                start,
                name: Some(name),
                attrs,
                keep_end,
                open_value,
            }))
        };
        loop {
            if i >= bytes.len() {
                self.pos = bytes.len();
                return truncated(attrs, i, None);
            }
            if is_ws(bytes[i]) {
                i += 1;
                continue;
            }
            match bytes[i] {
                b'>' => {
                    self.pos = i + 1;
                    return Ok(Event::Start(StartTag { name, attrs, self_closing: false, start }));
                }
                b'/' => {
                    if i + 1 < bytes.len() && bytes[i + 1] == b'>' {
                        self.pos = i + 2;
                        return Ok(Event::Start(StartTag {
                            name,
                            attrs,
                            self_closing: true,
                            start,
                        }));
                    }
                    if i + 1 >= bytes.len() {
                        self.pos = bytes.len();
                        // Drop the dangling slash; repair adds "/>".
                        return truncated(attrs, i, None);
                    }
                    let resume = self.find_resume(i);
                    self.pos = resume;
                    return Err(ScanError::Bogus {
                        start,
                        resume,
                        message: "stray '/' in start tag".to_string(),
                    });
                }
                c if is_name_start(c) => {
                    let attr_start = i;
                    while i < bytes.len() && is_name_char(bytes[i]) {
                        i += 1;
                    }
                    let attr_name = &self.text[attr_start..i];
                    while i < bytes.len() && is_ws(bytes[i]) {
                        i += 1;
                    }
                    if i >= bytes.len() {
                        self.pos = bytes.len();
                        return truncated(attrs, attr_start, None);
                    }
                    if bytes[i] != b'=' {
                        let resume = self.find_resume(i);
                        self.pos = resume;
                        return Err(ScanError::Bogus {
                            start,
                            resume,
                            message: format!("attribute `{attr_name}` has no value"),
                        });
                    }
                    i += 1;
                    while i < bytes.len() && is_ws(bytes[i]) {
                        i += 1;
                    }
                    if i >= bytes.len() {
                        self.pos = bytes.len();
                        return truncated(attrs, attr_start, None);
                    }
                    let quote = bytes[i];
                    if quote != b'"' && quote != b'\'' {
                        let resume = self.find_resume(i);
                        self.pos = resume;
                        return Err(ScanError::Bogus {
                            start,
                            resume,
                            message: format!("attribute `{attr_name}` value is not quoted"),
                        });
                    }
                    i += 1;
                    let value_start = i;
                    while i < bytes.len() && bytes[i] != quote {
                        i += 1;
                    }
                    if i >= bytes.len() {
                        self.pos = bytes.len();
                        return truncated(
                            attrs,
                            bytes.len(),
                            Some((attr_name, value_start..bytes.len())),
                        );
                    }
                    attrs.push(Attr {
                        name: attr_name,
                        value: decode_entities(&self.text[value_start..i]),
                        value_span: value_start..i,
                        name_start: attr_start,
                    });
                    i += 1;
                }
                _ => {
                    let resume = self.find_resume(i);
                    self.pos = resume;
                    return Err(ScanError::Bogus {
                        start,
                        resume,
                        message: "unexpected character in start tag".to_string(),
                    });
                }
            }
        }
    }
}

/// Resolves the five predefined entities plus numeric references. Unknown
/// or malformed references pass through literally.
pub(crate) fn decode_entities(raw: &str) -> Cow<'_, str> {
    if !raw.contains('&') {
        return Cow::Borrowed(raw);
    }
    let mut out = String::with_capacity(raw.len());
    let bytes = raw.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'&' {
            let ch_len = utf8_len(bytes[i]);
            out.push_str(&raw[i..i + ch_len]);
            i += ch_len;
            continue;
        }
        let end = bytes[i + 1..]
            .iter()
            .take(32)
            .position(|&b| b == b';')
            .map(|p| i + 1 + p);
        let Some(end) = end else {
            out.push('&');
            i += 1;
            continue;
        };
        let body = &raw[i + 1..end];
        let decoded = match body {
            "amp" => Some('&'),
            "lt" => Some('<'),
            "gt" => Some('>'),
            "quot" => Some('"'),
            "apos" => Some('\''),
            _ => body
                .strip_prefix("#x")
                .or_else(|| body.strip_prefix("#X"))
                .and_then(|h| u32::from_str_radix(h, 16).ok())
                .or_else(|| body.strip_prefix('#').and_then(|d| d.parse::<u32>().ok()))
                .and_then(char::from_u32),
        };
        match decoded {
            Some(c) => {
                out.push(c);
                i = end + 1;
            }
            None => {
                out.push('&');
                i += 1;
            }
        }
    }
    Cow::Owned(out)
}

fn utf8_len(lead: u8) -> usize {
    match lead {
        b if b < 0x80 => 1,
        b if b < 0xe0 => 2,
        b if b < 0xf0 => 3,
        _ => 4,
    }
}

/// Finds the byte offset of the first real `<svg` start tag: the name must
/// end at a delimiter so that e.g. `<svgfoo>` does not match.
pub(crate) fn find_svg_tag(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut from = 0;
    while let Some(rel) = text[from..].find("<svg") {
        let at = from + rel;
        let after = at + 4;
        if after >= bytes.len() || is_ws(bytes[after]) || bytes[after] == b'>' || bytes[after] == b'/'
        {
            return Some(at);
        }
        from = at + 1;
    }
    None
}

//! Binary index snapshot.
//!
//! Layout (integers are LEB128 varints unless noted, strings are a varint
//! byte length followed by UTF-8):
//!
//! ```text
//! "NGIR1"  format-version:u32le  k1:f64le  b:f64le
//! analyzer-flag:u8 [stopwords:str lexicon:str extent:u8 window:varint pattern:u8 regex:str]
//! doc-count  doc-id:str*
//! per field (plain, tagged):
//!   doc-length*  term-count  (term:str df (doc-delta tf)*)*   terms sorted
//! ```

use std::fs;
use std::path::Path;

use regex::Regex;

use super::{Bm25Params, FieldIndex, Index, Posting};
use crate::analysis::Analyzer;
use crate::corpus::{Stopwords, TokenPattern, TokenizerConfig};
use crate::error::{Error, Result};
use crate::negation::{ScopeExtent, TriggerLexicon};

pub const SNAPSHOT_MAGIC: &[u8; 5] = b"NGIR1";
const FORMAT_VERSION: u32 = 1;

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn varint(&mut self, mut v: u64) {
        loop {
            let byte = (v & 0x7f) as u8;
            v >>= 7;
            if v == 0 {
                self.buf.push(byte);
                return;
            }
            self.buf.push(byte | 0x80);
        }
    }

    fn str(&mut self, s: &str) {
        self.varint(s.len() as u64);
        self.buf.extend_from_slice(s.as_bytes());
    }

    fn field(&mut self, field: &FieldIndex) {
        for &len in &field.doc_lengths {
            self.varint(len as u64);
        }
        let mut terms: Vec<_> = field.postings.iter().collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(b.0));
        self.varint(terms.len() as u64);
        for (term, postings) in terms {
            self.str(term);
            self.varint(postings.len() as u64);
            let mut prev = 0u32;
            for p in postings {
                self.varint((p.doc - prev) as u64);
                self.varint(p.tf as u64);
                prev = p.doc;
            }
        }
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Snapshot(format!("{what} at byte {}", self.pos))
    }

    fn bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        let end = end.ok_or_else(|| self.err("unexpected end of file"))?;
        let out = &self.data[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes(1)?[0])
    }

    fn u32le(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes(4)?.try_into().unwrap()))
    }

    fn f64le(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes(8)?.try_into().unwrap()))
    }

    fn varint(&mut self) -> Result<u64> {
        let mut v = 0u64;
        for shift in (0..64).step_by(7) {
            let byte = self.u8()?;
            v |= ((byte & 0x7f) as u64) << shift;
            if byte & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(self.err("varint overflow"))
    }

    fn u32(&mut self) -> Result<u32> {
        let v = self.varint()?;
        u32::try_from(v).map_err(|_| self.err("value exceeds u32"))
    }

    fn str(&mut self) -> Result<String> {
        let n = self.varint()? as usize;
        let bytes = self.bytes(n)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| self.err("invalid UTF-8"))
    }

    fn field(&mut self, doc_count: usize) -> Result<FieldIndex> {
        let mut field = FieldIndex::default();
        for _ in 0..doc_count {
            field.doc_lengths.push(self.u32()?);
        }
        let terms = self.varint()?;
        for _ in 0..terms {
            let term = self.str()?;
            let df = self.varint()? as usize;
            if df == 0 || df > doc_count {
                return Err(self.err("posting list length out of range"));
            }
            let mut postings = Vec::with_capacity(df);
            let mut doc = 0u32;
            for i in 0..df {
                let delta = self.u32()?;
                if i > 0 && delta == 0 {
                    return Err(self.err("postings not strictly ascending"));
                }
                doc = doc.checked_add(delta).ok_or_else(|| self.err("doc number overflow"))?;
                if doc as usize >= doc_count {
                    return Err(self.err("posting references unknown document"));
                }
                let tf = self.u32()?;
                if tf == 0 {
                    return Err(self.err("zero term frequency"));
                }
                postings.push(Posting { doc, tf });
            }
            if field.postings.insert(term, postings).is_some() {
                return Err(self.err("duplicate term"));
            }
        }
        field.finish();
        Ok(field)
    }
}

pub fn encode(index: &Index) -> Vec<u8> {
    let mut w = Writer { buf: Vec::new() };
    w.buf.extend_from_slice(SNAPSHOT_MAGIC);
    w.buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    w.buf.extend_from_slice(&index.params.k1.to_le_bytes());
    w.buf.extend_from_slice(&index.params.b.to_le_bytes());
    match &index.analyzer {
        None => w.buf.push(0),
        Some(a) => {
            w.buf.push(1);
            w.str(&a.tokenizer.stopwords.to_text());
            w.str(&a.lexicon.to_text());
            match a.extent {
                ScopeExtent::SubSentence => {
                    w.buf.push(0);
                    w.varint(0);
                }
                ScopeExtent::Window(n) => {
                    w.buf.push(1);
                    w.varint(n as u64);
                }
            }
            match &a.tokenizer.pattern {
                TokenPattern::AlphaNumeric => {
                    w.buf.push(0);
                    w.str("");
                }
                TokenPattern::Custom(re) => {
                    w.buf.push(1);
                    w.str(re.as_str());
                }
            }
        }
    }
    w.varint(index.doc_ids.len() as u64);
    for id in &index.doc_ids {
        w.str(id);
    }
    w.field(&index.plain);
    w.field(&index.tagged);
    w.buf
}

pub fn decode(data: &[u8]) -> Result<Index> {
    let mut r = Reader { data, pos: 0 };
    if r.bytes(SNAPSHOT_MAGIC.len()).ok() != Some(&SNAPSHOT_MAGIC[..]) {
        return Err(Error::Snapshot("missing NGIR1 magic".into()));
    }
    let version = r.u32le()?;
    if version != FORMAT_VERSION {
        return Err(Error::Snapshot(format!("unsupported format version {version}")));
    }
    let params = Bm25Params {
        k1: r.f64le()?,
        b: r.f64le()?,
    };
    let analyzer = match r.u8()? {
        0 => None,
        1 => {
            let stopwords = Stopwords::parse(&r.str()?);
            let lexicon = TriggerLexicon::parse(&r.str()?)?;
            let extent = match (r.u8()?, r.varint()?) {
                (0, _) => ScopeExtent::SubSentence,
                (1, n) => ScopeExtent::Window(n as usize),
                _ => return Err(r.err("unknown scope extent")),
            };
            let pattern = match (r.u8()?, r.str()?) {
                (0, _) => TokenPattern::AlphaNumeric,
                (1, re) => {
                    TokenPattern::Custom(Regex::new(&re).map_err(|e| Error::Snapshot(format!("token pattern: {e}")))?)
                }
                _ => return Err(r.err("unknown token pattern")),
            };
            Some(Analyzer {
                tokenizer: TokenizerConfig { stopwords, pattern },
                lexicon,
                extent,
            })
        }
        _ => return Err(r.err("bad analyzer flag")),
    };
    let n = r.varint()? as usize;
    let mut doc_ids = Vec::with_capacity(n.min(data.len()));
    let mut lookup = std::collections::HashMap::with_capacity(n.min(data.len()));
    for i in 0..n {
        let id = r.str()?;
        if lookup.insert(id.clone(), i as u32).is_some() {
            return Err(Error::DuplicateId(id));
        }
        doc_ids.push(id);
    }
    let plain = r.field(n)?;
    let tagged = r.field(n)?;
    if r.pos != data.len() {
        return Err(r.err("trailing bytes"));
    }
    Ok(Index {
        doc_ids,
        lookup,
        plain,
        tagged,
        params,
        analyzer,
    })
}

pub fn write_snapshot(index: &Index, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(index)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<Index> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&data)
}

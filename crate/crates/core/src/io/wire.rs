//! proto3 codec for `.semanticgraph` files.
//!
//! Field numbers:
//!
//! ```text
//! Location          uri=1 startLine=2 startCharacter=3 endLine=4 endCharacter=5
//! Edge              to=1 type=2 location=3 properties=4
//! GraphNode         id=1 kind=2 location=3 properties=4 displayName=5 edges=6
//! SemanticGraphFile uri=1 nodes=2
//! ```
//!
//! Fields are written in field-number order and default scalars are
//! omitted. Map entries always carry both key and value, sorted by key.

use thiserror::Error;

use crate::model::{
    Edge, EdgeType, GraphNode, NodeKind, Properties, SemanticGraphFile, SourceLocation,
};

const VARINT: u8 = 0;
const I64: u8 = 1;
const LEN: u8 = 2;
const I32: u8 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed semanticgraph data at byte {offset}: {kind}")]
pub struct DecodeError {
    pub offset: usize,
    pub kind: DecodeErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeErrorKind {
    #[error("truncated varint")]
    TruncatedVarint,
    #[error("varint longer than 10 bytes")]
    VarintOverflow,
    #[error("length {len} exceeds remaining {remaining} bytes")]
    TruncatedField { len: u64, remaining: usize },
    #[error("invalid utf-8 in string field")]
    InvalidUtf8,
    #[error("field number 0 is reserved")]
    ZeroField,
    #[error("unsupported wire type {0}")]
    WireType(u8),
    #[error("field {field} has wire type {got}, expected {expected}")]
    WrongWireType { field: u32, got: u8, expected: u8 },
}

// ---------------------------------------------------------------- encoding

fn put_varint(buf: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        buf.push((v as u8) | 0x80);
        v >>= 7;
    }
    buf.push(v as u8);
}

fn put_tag(buf: &mut Vec<u8>, field: u32, wire: u8) {
    put_varint(buf, (u64::from(field) << 3) | u64::from(wire));
}

fn put_string(buf: &mut Vec<u8>, field: u32, s: &str) {
    if !s.is_empty() {
        put_bytes(buf, field, s.as_bytes());
    }
}

fn put_bytes(buf: &mut Vec<u8>, field: u32, b: &[u8]) {
    put_tag(buf, field, LEN);
    put_varint(buf, b.len() as u64);
    buf.extend_from_slice(b);
}

fn put_int32(buf: &mut Vec<u8>, field: u32, v: i32) {
    if v != 0 {
        put_tag(buf, field, VARINT);
        // negative int32 values are sign-extended to 64 bits
        put_varint(buf, i64::from(v) as u64);
    }
}

fn put_message(
    buf: &mut Vec<u8>,
    field: u32,
    scratch: &mut Vec<u8>,
    body: impl FnOnce(&mut Vec<u8>),
) {
    scratch.clear();
    body(scratch);
    put_bytes(buf, field, scratch);
}

fn encode_location(buf: &mut Vec<u8>, loc: &SourceLocation) {
    put_string(buf, 1, &loc.uri);
    put_int32(buf, 2, loc.start_line);
    put_int32(buf, 3, loc.start_character);
    put_int32(buf, 4, loc.end_line);
    put_int32(buf, 5, loc.end_character);
}

fn encode_properties(buf: &mut Vec<u8>, field: u32, props: &Properties) {
    let mut entry = Vec::new();
    for (k, v) in props {
        entry.clear();
        put_bytes(&mut entry, 1, k.as_bytes());
        put_bytes(&mut entry, 2, v.as_bytes());
        put_bytes(buf, field, &entry);
    }
}

fn encode_edge(buf: &mut Vec<u8>, edge: &Edge) {
    put_string(buf, 1, edge.to.as_str());
    put_string(buf, 2, edge.edge_type.as_str());
    if let Some(loc) = &edge.location {
        put_message(buf, 3, &mut Vec::new(), |b| encode_location(b, loc));
    }
    encode_properties(buf, 4, &edge.properties);
}

fn encode_node(buf: &mut Vec<u8>, node: &GraphNode) {
    put_string(buf, 1, node.id.as_str());
    put_string(buf, 2, node.kind.as_str());
    if let Some(loc) = &node.location {
        put_message(buf, 3, &mut Vec::new(), |b| encode_location(b, loc));
    }
    encode_properties(buf, 4, &node.properties);
    put_string(buf, 5, &node.display_name);
    let mut scratch = Vec::new();
    for edge in &node.edges {
        put_message(buf, 6, &mut scratch, |b| encode_edge(b, edge));
    }
}

pub fn encode_file(file: &SemanticGraphFile) -> Vec<u8> {
    let mut buf = Vec::new();
    put_string(&mut buf, 1, &file.uri);
    let mut scratch = Vec::new();
    for node in &file.nodes {
        put_message(&mut buf, 2, &mut scratch, |b| encode_node(b, node));
    }
    buf
}

// ---------------------------------------------------------------- decoding

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
    /// Offset of `data[0]` in the outermost buffer, for error reporting.
    base: usize,
}

enum Value<'a> {
    Varint(u64),
    Bytes(&'a [u8], usize),
    Skipped,
}

impl<'a> Reader<'a> {
    fn new(data: &'a [u8], base: usize) -> Self {
        Reader { data, pos: 0, base }
    }

    fn err(&self, at: usize, kind: DecodeErrorKind) -> DecodeError {
        DecodeError {
            offset: self.base + at,
            kind,
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.data.len()
    }

    fn varint(&mut self) -> Result<u64, DecodeError> {
        let start = self.pos;
        let mut v: u64 = 0;
        for i in 0..10 {
            let Some(&b) = self.data.get(self.pos) else {
                return Err(self.err(start, DecodeErrorKind::TruncatedVarint));
            };
            self.pos += 1;
            v |= u64::from(b & 0x7f) << (7 * i);
            if b & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(self.err(start, DecodeErrorKind::VarintOverflow))
    }

    fn take(&mut self, len: u64) -> Result<(&'a [u8], usize), DecodeError> {
        let remaining = self.data.len() - self.pos;
        if len > remaining as u64 {
            return Err(self.err(self.pos, DecodeErrorKind::TruncatedField { len, remaining }));
        }
        let start = self.pos;
        self.pos += len as usize;
        Ok((&self.data[start..self.pos], self.base + start))
    }

    /// Next (field, value); unknown wire types that proto3 still permits are skipped.
    fn field(&mut self) -> Result<(u32, u8, Value<'a>), DecodeError> {
        let at = self.pos;
        let key = self.varint()?;
        let field = (key >> 3) as u32;
        let wire = (key & 7) as u8;
        if field == 0 {
            return Err(self.err(at, DecodeErrorKind::ZeroField));
        }
        let value = match wire {
            VARINT => Value::Varint(self.varint()?),
            LEN => {
                let len = self.varint()?;
                let (b, off) = self.take(len)?;
                Value::Bytes(b, off)
            }
            I64 => {
                self.take(8)?;
                Value::Skipped
            }
            I32 => {
                self.take(4)?;
                Value::Skipped
            }
            other => return Err(self.err(at, DecodeErrorKind::WireType(other))),
        };
        Ok((field, wire, value))
    }
}

fn expect_bytes<'a>(
    field: u32,
    wire: u8,
    v: Value<'a>,
    at: usize,
) -> Result<(&'a [u8], usize), DecodeError> {
    match v {
        Value::Bytes(b, off) => Ok((b, off)),
        _ => Err(DecodeError {
            offset: at,
            kind: DecodeErrorKind::WrongWireType {
                field,
                got: wire,
                expected: LEN,
            },
        }),
    }
}

fn expect_varint(field: u32, wire: u8, v: Value<'_>, at: usize) -> Result<u64, DecodeError> {
    match v {
        Value::Varint(x) => Ok(x),
        _ => Err(DecodeError {
            offset: at,
            kind: DecodeErrorKind::WrongWireType {
                field,
                got: wire,
                expected: VARINT,
            },
        }),
    }
}

fn utf8(b: &[u8], off: usize) -> Result<String, DecodeError> {
    std::str::from_utf8(b)
        .map(str::to_owned)
        .map_err(|e| DecodeError {
            offset: off + e.valid_up_to(),
            kind: DecodeErrorKind::InvalidUtf8,
        })
}

/// Walks the fields of one message, passing known ones to `on_field`.
fn each_field<'a>(
    data: &'a [u8],
    base: usize,
    mut on_field: impl FnMut(u32, u8, Value<'a>, usize) -> Result<(), DecodeError>,
) -> Result<(), DecodeError> {
    let mut r = Reader::new(data, base);
    while !r.done() {
        let at = base + r.pos;
        let (field, wire, value) = r.field()?;
        if !matches!(value, Value::Skipped) {
            on_field(field, wire, value, at)?;
        }
    }
    Ok(())
}

fn decode_location(loc: &mut SourceLocation, data: &[u8], base: usize) -> Result<(), DecodeError> {
    each_field(data, base, |field, wire, v, at| {
        match field {
            1 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                loc.uri = utf8(b, off)?;
            }
            2..=5 => {
                let x = expect_varint(field, wire, v, at)? as i32;
                match field {
                    2 => loc.start_line = x,
                    3 => loc.start_character = x,
                    4 => loc.end_line = x,
                    _ => loc.end_character = x,
                }
            }
            _ => {}
        }
        Ok(())
    })
}

fn decode_entry(props: &mut Properties, data: &[u8], base: usize) -> Result<(), DecodeError> {
    let mut key = String::new();
    let mut value = String::new();
    each_field(data, base, |field, wire, v, at| {
        match field {
            1 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                key = utf8(b, off)?;
            }
            2 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                value = utf8(b, off)?;
            }
            _ => {}
        }
        Ok(())
    })?;
    props.insert(key, value);
    Ok(())
}

fn decode_edge(data: &[u8], base: usize) -> Result<Edge, DecodeError> {
    let mut to = String::new();
    let mut ty = String::new();
    let mut location: Option<SourceLocation> = None;
    let mut properties = Properties::new();
    each_field(data, base, |field, wire, v, at| {
        match field {
            1 | 2 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                let s = utf8(b, off)?;
                if field == 1 {
                    to = s;
                } else {
                    ty = s;
                }
            }
            3 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                decode_location(location.get_or_insert_with(Default::default), b, off)?;
            }
            4 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                decode_entry(&mut properties, b, off)?;
            }
            _ => {}
        }
        Ok(())
    })?;
    Ok(Edge {
        to: to.into(),
        edge_type: EdgeType::from(ty.as_str()),
        location,
        properties,
    })
}

fn decode_node(data: &[u8], base: usize) -> Result<GraphNode, DecodeError> {
    let mut id = String::new();
    let mut kind = String::new();
    let mut display_name = String::new();
    let mut location: Option<SourceLocation> = None;
    let mut properties = Properties::new();
    let mut edges = Vec::new();
    each_field(data, base, |field, wire, v, at| {
        match field {
            1 | 2 | 5 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                let s = utf8(b, off)?;
                match field {
                    1 => id = s,
                    2 => kind = s,
                    _ => display_name = s,
                }
            }
            3 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                decode_location(location.get_or_insert_with(Default::default), b, off)?;
            }
            4 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                decode_entry(&mut properties, b, off)?;
            }
            6 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                edges.push(decode_edge(b, off)?);
            }
            _ => {}
        }
        Ok(())
    })?;
    Ok(GraphNode {
        id: id.into(),
        kind: NodeKind::from(kind.as_str()),
        location,
        display_name,
        properties,
        edges,
    })
}

pub fn decode_file(bytes: &[u8]) -> Result<SemanticGraphFile, DecodeError> {
    let mut file = SemanticGraphFile::default();
    each_field(bytes, 0, |field, wire, v, at| {
        match field {
            1 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                file.uri = utf8(b, off)?;
            }
            2 => {
                let (b, off) = expect_bytes(field, wire, v, at)?;
                file.nodes.push(decode_node(b, off)?);
            }
            _ => {}
        }
        Ok(())
    })?;
    Ok(file)
}

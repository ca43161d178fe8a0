use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use super::lexer::{tokenize, Spanned, Token};
use super::{ParseError, ParsedDocument, SourceSpan};
use crate::model::{
    Architecture, Asil, Bus, BusType, Device, DeviceKind, Ecu, EcuRole, HardwareCircuit, Link, LinkKind, OsClass,
    Position, SignalKind, SoftwareComponent, VehicleFunction,
};

pub(crate) const BLOCK_KINDS: &[&str] = &["architecture", "bus", "circuit", "device", "ecu", "function", "link", "swc"];

#[derive(Debug, Clone)]
enum Value {
    Ident(String),
    Number(f64),
    Str(String),
    Tuple(Vec<f64>),
    List(Vec<String>),
}

impl Value {
    fn describe(&self) -> &'static str {
        match self {
            Value::Ident(_) => "identifier",
            Value::Number(_) => "number",
            Value::Str(_) => "string",
            Value::Tuple(_) => "tuple",
            Value::List(_) => "list",
        }
    }
}

struct Entry {
    key: String,
    key_span: SourceSpan,
    value: Value,
    value_span: SourceSpan,
}

struct Block {
    kind: String,
    id: String,
    span: SourceSpan,
    id_span: SourceSpan,
    entries: Vec<Entry>,
}

pub(crate) fn parse_document(text: &str, file: &str) -> Result<ParsedDocument, ParseError> {
    let tokens = tokenize(text, file)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut builder = Builder::default();
    while !p.at(&Token::Eof) {
        let block = p.block()?;
        builder.add(block)?;
    }
    Ok(builder.finish())
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn at(&self, t: &Token) -> bool {
        &self.peek().token == t
    }

    fn advance(&mut self) -> Spanned {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::new(
            t.span.clone(),
            format!("unexpected {}", t.token),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn expect(&mut self, t: Token, desc: &str) -> Result<SourceSpan, ParseError> {
        if self.at(&t) {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&[desc]))
        }
    }

    fn ident(&mut self, desc: &str) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().token {
            Token::Ident(s) => {
                let s = s.clone();
                Ok((s, self.advance().span))
            }
            _ => Err(self.unexpected(&[desc])),
        }
    }

    fn block(&mut self) -> Result<Block, ParseError> {
        let (kind, span) = match &self.peek().token {
            Token::Ident(s) if BLOCK_KINDS.contains(&s.as_str()) => {
                let s = s.clone();
                (s, self.advance().span)
            }
            Token::Ident(s) => {
                return Err(ParseError::new(
                    self.peek().span.clone(),
                    format!("unknown block kind `{s}`"),
                    BLOCK_KINDS.iter().map(|s| s.to_string()).collect(),
                ))
            }
            _ => return Err(self.unexpected(&["block kind"])),
        };
        let (id, id_span) = match &self.peek().token {
            Token::Str(s) if kind == "architecture" => {
                let s = s.clone();
                (s, self.advance().span)
            }
            _ => self.ident("identifier")?,
        };
        self.expect(Token::LBrace, "`{`")?;
        let mut entries = Vec::new();
        loop {
            if self.at(&Token::RBrace) {
                self.advance();
                break;
            }
            let (key, key_span) = self.ident("key")?;
            self.expect(Token::Colon, "`:`")?;
            let value_span = self.peek().span.clone();
            let value = self.value()?;
            entries.push(Entry { key, key_span, value, value_span });
            match self.peek().token {
                Token::Semi => {
                    self.advance();
                }
                Token::RBrace => {}
                _ => return Err(self.unexpected(&["`;`", "`}`"])),
            }
        }
        Ok(Block { kind, id, span, id_span, entries })
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        match self.peek().token {
            Token::Number(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.peek().token.clone() {
            Token::Ident(s) => {
                self.advance();
                Ok(Value::Ident(s))
            }
            Token::Number(n) => {
                self.advance();
                Ok(Value::Number(n))
            }
            Token::Str(s) => {
                self.advance();
                Ok(Value::Str(s))
            }
            Token::LParen => {
                self.advance();
                let mut items = vec![self.number()?];
                while self.at(&Token::Comma) {
                    self.advance();
                    items.push(self.number()?);
                }
                self.expect(Token::RParen, "`)`")?;
                Ok(Value::Tuple(items))
            }
            Token::LBracket => {
                self.advance();
                let mut items = Vec::new();
                loop {
                    if self.at(&Token::RBracket) {
                        self.advance();
                        break;
                    }
                    items.push(self.ident("identifier")?.0);
                    match self.peek().token {
                        Token::Comma => {
                            self.advance();
                        }
                        Token::RBracket => {}
                        _ => return Err(self.unexpected(&["`,`", "`]`"])),
                    }
                }
                Ok(Value::List(items))
            }
            _ => Err(self.unexpected(&["identifier", "number", "string", "`(`", "`[`"])),
        }
    }
}

/// Typed view over one block's entries; reports errors at entry spans.
struct Fields {
    kind: String,
    span: SourceSpan,
    entries: BTreeMap<String, Entry>,
}

impl Fields {
    fn new(block: &mut Block, allowed: &[&str]) -> Result<Self, ParseError> {
        let mut entries = BTreeMap::new();
        for entry in block.entries.drain(..) {
            let permitted = allowed.contains(&entry.key.as_str())
                || (block.kind == "architecture" && entry.key.starts_with("controller.") && entry.key.len() > 11);
            if !permitted {
                let mut expected: Vec<String> = allowed.iter().map(|s| s.to_string()).collect();
                if block.kind == "architecture" {
                    expected.push("controller.<domain>".into());
                }
                return Err(ParseError::new(
                    entry.key_span,
                    format!("unknown key `{}` in {} block", entry.key, block.kind),
                    expected,
                ));
            }
            if entries.contains_key(&entry.key) {
                return Err(ParseError::new(entry.key_span, format!("duplicate key `{}`", entry.key), vec![]));
            }
            entries.insert(entry.key.clone(), entry);
        }
        Ok(Fields { kind: block.kind.clone(), span: block.span.clone(), entries })
    }

    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<Entry, ParseError> {
        self.take(key).ok_or_else(|| {
            ParseError::new(
                self.span.clone(),
                format!("{} block is missing key `{key}`", self.kind),
                vec![format!("`{key}`")],
            )
        })
    }

    fn mismatch(entry: &Entry, expected: &str) -> ParseError {
        ParseError::new(
            entry.value_span.clone(),
            format!("`{}` expects a {expected}, found {}", entry.key, entry.value.describe()),
            vec![expected.to_string()],
        )
    }

    fn ident_of(entry: Entry) -> Result<String, ParseError> {
        match entry.value {
            Value::Ident(s) => Ok(s),
            _ => Err(Self::mismatch(&entry, "identifier")),
        }
    }

    fn number_of(entry: Entry) -> Result<f64, ParseError> {
        match entry.value {
            Value::Number(n) => Ok(n),
            _ => Err(Self::mismatch(&entry, "number")),
        }
    }

    fn ident(&mut self, key: &str) -> Result<String, ParseError> {
        Self::ident_of(self.required(key)?)
    }

    fn opt_ident(&mut self, key: &str) -> Result<Option<String>, ParseError> {
        self.take(key).map(Self::ident_of).transpose()
    }

    fn enumeration<T: FromStr>(&mut self, key: &str, names: Vec<&'static str>) -> Result<T, ParseError> {
        let entry = self.required(key)?;
        enum_of(entry, &names)
    }

    fn number(&mut self, key: &str, default: f64) -> Result<f64, ParseError> {
        self.take(key).map_or(Ok(default), Self::number_of)
    }

    fn required_number(&mut self, key: &str) -> Result<f64, ParseError> {
        Self::number_of(self.required(key)?)
    }

    fn boolean(&mut self, key: &str) -> Result<bool, ParseError> {
        let Some(entry) = self.take(key) else { return Ok(false) };
        match &entry.value {
            Value::Ident(s) if s == "true" => Ok(true),
            Value::Ident(s) if s == "false" => Ok(false),
            _ => Err(ParseError::new(
                entry.value_span.clone(),
                format!("`{}` expects a boolean", entry.key),
                vec!["true".into(), "false".into()],
            )),
        }
    }

    fn list(&mut self, key: &str) -> Result<Vec<String>, ParseError> {
        let Some(entry) = self.take(key) else { return Ok(Vec::new()) };
        match entry.value {
            Value::List(items) => Ok(items),
            _ => Err(Self::mismatch(&entry, "list")),
        }
    }

    fn required_list(&mut self, key: &str) -> Result<Vec<String>, ParseError> {
        let entry = self.required(key)?;
        match entry.value {
            Value::List(items) => Ok(items),
            _ => Err(Self::mismatch(&entry, "list")),
        }
    }

    fn string(&mut self, key: &str) -> Result<String, ParseError> {
        let Some(entry) = self.take(key) else { return Ok(String::new()) };
        match entry.value {
            Value::Str(s) => Ok(s),
            _ => Err(Self::mismatch(&entry, "string")),
        }
    }

    fn position(&mut self, key: &str) -> Result<Position, ParseError> {
        let entry = self.required(key)?;
        match &entry.value {
            Value::Tuple(v) if v.len() == 3 => Ok(Position::new(v[0], v[1], v[2])),
            Value::Tuple(v) => Err(ParseError::new(
                entry.value_span.clone(),
                format!("position needs 3 coordinates, found {}", v.len()),
                vec!["(x, y, z)".into()],
            )),
            _ => Err(Self::mismatch(&entry, "(x, y, z) tuple")),
        }
    }
}

fn enum_of<T: FromStr>(entry: Entry, names: &[&'static str]) -> Result<T, ParseError> {
    let expected: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    match &entry.value {
        Value::Ident(s) => s.parse::<T>().map_err(|_| {
            ParseError::new(entry.value_span.clone(), format!("invalid value `{s}` for `{}`", entry.key), expected)
        }),
        _ => Err(ParseError::new(
            entry.value_span.clone(),
            format!("`{}` expects one of {}", entry.key, names.join(", ")),
            expected,
        )),
    }
}

#[derive(Default)]
struct Builder {
    arch: Architecture,
    named: bool,
    seen: BTreeSet<(String, String)>,
    spans: BTreeMap<String, SourceSpan>,
}

impl Builder {
    fn add(&mut self, mut block: Block) -> Result<(), ParseError> {
        if block.kind == "architecture" {
            if self.named {
                return Err(ParseError::new(block.span, "a document describes exactly one architecture", vec![]));
            }
            self.named = true;
        } else if !self.seen.insert((block.kind.clone(), block.id.clone())) {
            return Err(ParseError::new(block.id_span, format!("duplicate {} `{}`", block.kind, block.id), vec![]));
        }
        if !super::lexer::is_ident(&block.id) && block.kind != "architecture" {
            return Err(ParseError::new(block.id_span, "identifier expected", vec!["identifier".into()]));
        }
        let id = block.id.clone();
        let span = block.span.clone();
        let arch = &mut self.arch;
        match block.kind.as_str() {
            "architecture" => {
                let mut f = Fields::new(&mut block, &["central"])?;
                arch.name = id.clone();
                arch.central_computer = f.opt_ident("central")?;
                let keys: Vec<String> = f.entries.keys().cloned().collect();
                for key in keys {
                    let entry = f.take(&key).unwrap();
                    let domain = key["controller.".len()..].to_string();
                    arch.domain_controller_of.insert(domain, Fields::ident_of(entry)?);
                }
                return Ok(());
            }
            "ecu" => {
                let mut f = Fields::new(
                    &mut block,
                    &["role", "pos", "os", "compute", "virtualization", "redundant_power", "redundant_comm", "domain"],
                )?;
                let role: EcuRole = f.enumeration("role", EcuRole::names())?;
                let position = f.position("pos")?;
                let os_classes = match f.take("os") {
                    None => BTreeSet::new(),
                    Some(entry) => os_list(entry)?,
                };
                arch.add_ecu(Ecu {
                    id: id.clone(),
                    role,
                    position,
                    compute_capacity: f.number("compute", 0.0)?,
                    os_classes,
                    virtualization: f.boolean("virtualization")?,
                    redundant_power: f.boolean("redundant_power")?,
                    redundant_comm: f.boolean("redundant_comm")?,
                    domain: f.opt_ident("domain")?,
                });
            }
            "device" => {
                let mut f = Fields::new(&mut block, &["kind", "signal", "pos", "data_rate"])?;
                arch.add_device(Device {
                    id: id.clone(),
                    kind: f.enumeration::<DeviceKind>("kind", DeviceKind::names())?,
                    signal: f.enumeration::<SignalKind>("signal", SignalKind::names())?,
                    position: f.position("pos")?,
                    data_rate: f.number("data_rate", 0.0)?,
                });
            }
            "circuit" => {
                let mut f = Fields::new(&mut block, &["host", "devices"])?;
                arch.add_circuit(HardwareCircuit {
                    id: id.clone(),
                    host: f.ident("host")?,
                    devices: f.required_list("devices")?,
                });
            }
            "swc" => {
                let mut f =
                    Fields::new(&mut block, &["function", "host", "os", "relocatable", "inputs", "outputs", "load"])?;
                arch.add_swc(SoftwareComponent {
                    id: id.clone(),
                    function: f.ident("function")?,
                    host: f.ident("host")?,
                    os_class: f.enumeration::<OsClass>("os", OsClass::names())?,
                    relocatable: f.boolean("relocatable")?,
                    inputs: f.list("inputs")?,
                    outputs: f.list("outputs")?,
                    load: f.number("load", 0.0)?,
                });
            }
            "link" => {
                let mut f = Fields::new(&mut block, &["kind", "a", "b", "shielded"])?;
                arch.add_link(Link {
                    id: id.clone(),
                    kind: f.enumeration::<LinkKind>("kind", LinkKind::names())?,
                    endpoint_a: f.ident("a")?,
                    endpoint_b: f.ident("b")?,
                    shielded: f.boolean("shielded")?,
                });
            }
            "bus" => {
                let mut f = Fields::new(&mut block, &["type", "bandwidth", "lin_master"])?;
                arch.add_bus(Bus {
                    id: id.clone(),
                    bus_type: f.enumeration::<BusType>("type", BusType::names())?,
                    bandwidth: f.required_number("bandwidth")?,
                    lin_master: f.opt_ident("lin_master")?,
                });
            }
            "function" => {
                let mut f = Fields::new(&mut block, &["asil", "swcs", "circuits", "devices", "description", "domain"])?;
                arch.add_function(VehicleFunction {
                    id: id.clone(),
                    asil: f.enumeration::<Asil>("asil", Asil::names())?,
                    swcs: f.list("swcs")?,
                    circuits: f.list("circuits")?,
                    devices: f.list("devices")?,
                    description: f.string("description")?,
                    domain: f.opt_ident("domain")?,
                });
            }
            _ => unreachable!("block kinds are checked by the parser"),
        }
        self.spans.entry(id).or_insert(span);
        Ok(())
    }

    fn finish(mut self) -> ParsedDocument {
        if !self.named {
            self.arch.name = "unnamed".into();
        }
        ParsedDocument { architecture: self.arch, spans: self.spans }
    }
}

fn os_list(entry: Entry) -> Result<BTreeSet<OsClass>, ParseError> {
    let Value::List(items) = &entry.value else {
        return Err(Fields::mismatch(&entry, "list"));
    };
    items
        .iter()
        .map(|s| {
            s.parse::<OsClass>().map_err(|_| {
                ParseError::new(
                    entry.value_span.clone(),
                    format!("invalid OS class `{s}`"),
                    OsClass::names().iter().map(|s| s.to_string()).collect(),
                )
            })
        })
        .collect()
}

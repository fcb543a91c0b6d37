//! A Turtle subset: `@prefix`, `<iri>`, prefixed names, `a`, `;` and `,`
//! lists, `( )` collections, `[ ]` and `_:` blank nodes, double-quoted
//! strings, bare integers and `#` comments.
//!
//! Serialization is deterministic: prefixes and subjects are sorted (IRIs
//! before blank nodes), `a` comes first in each block, blank nodes that are
//! referenced exactly once are nested inline, and unshared rdf:List chains
//! are written as `( ... )`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{canon, vocab, Graph, RdfError, Term, Triple};

/// Parses Turtle text into a graph. Blank node labels are reassigned
/// (`b0`, `b1`, ...) in order of first appearance.
pub fn parse_turtle(text: &str) -> Result<Graph, RdfError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        graph: Graph::new(),
        labels: HashMap::new(),
        next_blank: 0,
    };
    p.document()?;
    Ok(p.graph)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    graph: Graph,
    labels: HashMap<String, String>,
    next_blank: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || (!c.is_ascii() && c.is_alphanumeric())
}

fn is_name_char(c: char) -> bool {
    is_name_start(c) || c == '-'
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, RdfError> {
        let (line, col) = self.location(pos);
        Err(RdfError::Syntax { line, col, message: message.into() })
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, RdfError> {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), RdfError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.error(format!("expected `{want}`, found `{c}`")),
            None => self.error(format!("expected `{want}` at end of input")),
        }
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn fresh_blank(&mut self) -> Term {
        let label = format!("b{}", self.next_blank);
        self.next_blank += 1;
        Term::Blank(label)
    }

    fn document(&mut self) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            if self.starts_with("@prefix") {
                self.prefix_directive()?;
            } else if self.starts_with("@") {
                return self.error("unsupported directive");
            } else {
                self.statement()?;
                self.expect('.')?;
            }
        }
    }

    fn prefix_directive(&mut self) -> Result<(), RdfError> {
        self.pos += "@prefix".len();
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| is_name_char(c) || c == '.') {
            self.pos += 1;
        }
        let prefix: String = self.chars[start..self.pos].iter().collect();
        if self.peek() != Some(':') {
            return self.error("expected `:` after prefix name");
        }
        self.pos += 1;
        self.skip_ws();
        if self.peek() != Some('<') {
            return self.error("expected `<namespace>`");
        }
        let ns = self.iriref()?;
        self.graph.prefixes.insert(prefix, ns);
        self.expect('.')
    }

    fn statement(&mut self) -> Result<(), RdfError> {
        let subject = match self.peek() {
            Some('[') => {
                let node = self.blank_property_list()?;
                self.skip_ws();
                if self.peek() == Some('.') {
                    return Ok(());
                }
                node
            }
            Some('(') => self.collection()?,
            _ => self.resource()?,
        };
        if subject == Term::iri(vocab::RDF_NIL) && self.chars.get(self.pos.wrapping_sub(1)) == Some(&')') {
            return self.error("an empty collection cannot be a subject");
        }
        self.predicate_object_list(&subject)
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.pos += 1;
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']') | None) {
                return Ok(());
            }
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &str) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            let object = self.object()?;
            self.graph.insert(subject.clone(), predicate, object);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.pos += 1;
            } else {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<String, RdfError> {
        if self.peek() == Some('a') && !self.peek_at(1).is_some_and(|c| is_name_char(c) || c == ':' || c == '.') {
            self.pos += 1;
            return Ok(vocab::RDF_TYPE.to_string());
        }
        match self.resource()? {
            Term::Iri(i) => Ok(i),
            _ => self.error("predicate must be an IRI"),
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            Some('[') => self.blank_property_list(),
            Some('(') => self.collection(),
            Some('"') => self.string(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.integer(),
            Some(_) => self.resource(),
            None => self.error("expected an object at end of input"),
        }
    }

    /// An IRI, prefixed name or labelled blank node.
    fn resource(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => {
                self.pos += 2;
                let start = self.pos;
                self.name_chars();
                if start == self.pos {
                    return self.error("empty blank node label");
                }
                let label: String = self.chars[start..self.pos].iter().collect();
                if let Some(existing) = self.labels.get(&label) {
                    return Ok(Term::Blank(existing.clone()));
                }
                let fresh = self.fresh_blank();
                if let Term::Blank(b) = &fresh {
                    self.labels.insert(label, b.clone());
                }
                Ok(fresh)
            }
            Some(c) if is_name_start(c) || c == ':' => self.prefixed_name(),
            Some(c) => self.error(format!("unexpected `{c}`")),
            None => self.error("unexpected end of input"),
        }
    }

    fn name_chars(&mut self) {
        while let Some(c) = self.peek() {
            if is_name_char(c) || (c == '.' && self.peek_at(1).is_some_and(is_name_char)) {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn prefixed_name(&mut self) -> Result<Term, RdfError> {
        let start = self.pos;
        self.name_chars();
        let prefix: String = self.chars[start..self.pos].iter().collect();
        if self.peek() != Some(':') {
            return self.error_at(start, format!("expected a prefixed name, found `{prefix}`"));
        }
        self.pos += 1;
        let local_start = self.pos;
        self.name_chars();
        let local: String = self.chars[local_start..self.pos].iter().collect();
        match self.graph.prefixes.get(&prefix) {
            Some(ns) => Ok(Term::Iri(format!("{ns}{local}"))),
            None => {
                let (line, col) = self.location(start);
                Err(RdfError::UnknownPrefix { line, col, prefix })
            }
        }
    }

    fn iriref(&mut self) -> Result<String, RdfError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') => {
                    return self.error_at(self.pos - 1, format!("invalid character `{}` in IRI", c.escape_default()));
                }
                Some(c) => out.push(c),
                None => return self.error_at(start, "unterminated IRI"),
            }
        }
    }

    fn blank_property_list(&mut self) -> Result<Term, RdfError> {
        self.pos += 1;
        let node = self.fresh_blank();
        self.skip_ws();
        if self.peek() != Some(']') {
            self.predicate_object_list(&node)?;
        }
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, RdfError> {
        self.pos += 1;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                None => return self.error("unterminated collection"),
                _ => items.push(self.object()?),
            }
        }
        let mut head = Term::iri(vocab::RDF_NIL);
        let cells: Vec<Term> = items.iter().map(|_| self.fresh_blank()).collect();
        for (i, item) in items.into_iter().enumerate() {
            let next = cells.get(i + 1).cloned().unwrap_or_else(|| Term::iri(vocab::RDF_NIL));
            self.graph.insert(cells[i].clone(), vocab::RDF_FIRST, item);
            self.graph.insert(cells[i].clone(), vocab::RDF_REST, next);
        }
        if let Some(first) = cells.first() {
            head = first.clone();
        }
        Ok(head)
    }

    fn string(&mut self) -> Result<Term, RdfError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => {
                    let esc = self.bump();
                    match esc {
                        Some('n') => out.push('\n'),
                        Some('t') => out.push('\t'),
                        Some('r') => out.push('\r'),
                        Some('b') => out.push('\u{8}'),
                        Some('f') => out.push('\u{c}'),
                        Some('"') => out.push('"'),
                        Some('\'') => out.push('\''),
                        Some('\\') => out.push('\\'),
                        Some(u @ ('u' | 'U')) => {
                            let n = if u == 'u' { 4 } else { 8 };
                            let hex: String = (0..n).filter_map(|_| self.bump()).collect();
                            let ch = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32);
                            match ch {
                                Some(ch) if hex.len() == n => out.push(ch),
                                _ => return self.error("invalid unicode escape"),
                            }
                        }
                        _ => return self.error_at(self.pos - 1, "invalid escape"),
                    }
                }
                Some('\n') | Some('\r') => return self.error_at(self.pos - 1, "newline in string literal"),
                Some(c) => out.push(c),
                None => return self.error_at(start, "unterminated string"),
            }
        }
        if self.peek() == Some('@') || self.starts_with("^^") {
            return self.error("language tags and datatypes are not supported");
        }
        Ok(Term::Str(out))
    }

    fn integer(&mut self) -> Result<Term, RdfError> {
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits == self.pos {
            return self.error_at(start, "expected digits");
        }
        if (self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()))
            || matches!(self.peek(), Some('e') | Some('E'))
        {
            return self.error_at(start, "only integer numbers are supported");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<i64>() {
            Ok(n) => Ok(Term::Int(n)),
            Err(_) => self.error_at(start, "integer out of range"),
        }
    }
}

/// Escapes a string for a double-quoted Turtle literal.
pub fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn valid_local(local: &str) -> bool {
    let Some(first) = local.chars().next() else { return true };
    is_name_start(first) && !local.ends_with('.') && local.chars().all(|c| is_name_char(c) || c == '.')
}

/// Writes a graph as Turtle. Equal graphs produce identical bytes, and
/// graphs differing only in blank node labels do too.
pub fn serialize_turtle(graph: &Graph) -> String {
    Writer::new(graph).write()
}

struct Writer<'g> {
    graph: &'g Graph,
    by_subject: BTreeMap<&'g Term, Vec<&'g Triple>>,
    inline: HashSet<&'g str>,
    collections: HashSet<&'g str>,
    labels: HashMap<&'g str, String>,
    prefixes: Vec<(&'g str, &'g str)>,
}

impl<'g> Writer<'g> {
    fn new(graph: &'g Graph) -> Self {
        let mut by_subject: BTreeMap<&Term, Vec<&Triple>> = BTreeMap::new();
        let mut refs: HashMap<&str, usize> = HashMap::new();
        for t in &graph.triples {
            by_subject.entry(&t.subject).or_default().push(t);
            if let Term::Blank(b) = &t.object {
                *refs.entry(b).or_default() += 1;
            }
        }
        let inline_candidates: HashSet<&str> = refs.iter().filter(|(_, n)| **n == 1).map(|(b, _)| *b).collect();
        let mut w = Writer {
            graph,
            by_subject,
            inline: inline_candidates,
            collections: HashSet::new(),
            labels: HashMap::new(),
            prefixes: graph.prefixes.iter().map(|(p, n)| (p.as_str(), n.as_str())).collect(),
        };
        let heads: Vec<&str> = w.inline.iter().copied().filter(|b| w.is_collection(b)).collect();
        w.collections.extend(heads);
        w.break_cycles();
        let ranks = canon::blank_ranks(graph);
        let mut labelled: Vec<&str> = graph
            .triples
            .iter()
            .flat_map(|t| [&t.subject, &t.object])
            .filter_map(|t| match t {
                Term::Blank(b) if !w.inline.contains(b.as_str()) => Some(b.as_str()),
                _ => None,
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        labelled.sort_by_key(|b| ranks.get(*b).copied().unwrap_or(usize::MAX));
        w.labels = labelled.into_iter().enumerate().map(|(i, b)| (b, format!("b{i}"))).collect();
        w
    }

    fn subject_triples(&self, blank: &str) -> &[&'g Triple] {
        self.by_subject.get(&Term::Blank(blank.to_string())).map_or(&[], Vec::as_slice)
    }

    /// An inline-able chain of pure rdf:first/rdf:rest cells ending in rdf:nil.
    fn is_collection(&self, head: &str) -> bool {
        let mut seen = HashSet::new();
        let mut cur = head.to_string();
        loop {
            if !seen.insert(cur.clone()) || !self.inline.contains(cur.as_str()) {
                return false;
            }
            let ts = self.subject_triples(&cur);
            let first = ts.iter().filter(|t| t.predicate == vocab::RDF_FIRST).count();
            let rest: Vec<&Term> = ts.iter().filter(|t| t.predicate == vocab::RDF_REST).map(|t| &t.object).collect();
            if ts.len() != 2 || first != 1 || rest.len() != 1 {
                return false;
            }
            match rest[0] {
                Term::Iri(i) if i == vocab::RDF_NIL => return true,
                Term::Blank(b) => cur = b.clone(),
                _ => return false,
            }
        }
    }

    /// Blank nodes that are only reachable from each other (a cycle of single
    /// references) would never be printed; promote one per cycle to a
    /// top-level labelled subject.
    fn break_cycles(&mut self) {
        let ranks = canon::blank_ranks(self.graph);
        let mut reached: HashSet<&str> = HashSet::new();
        let roots: Vec<&Term> = self
            .by_subject
            .keys()
            .copied()
            .filter(|s| match s {
                Term::Blank(b) => !self.inline.contains(b.as_str()),
                _ => true,
            })
            .collect();
        for r in roots {
            self.mark_reached(r, &mut reached);
        }
        loop {
            let mut orphans: Vec<&str> = self
                .by_subject
                .keys()
                .filter_map(|s| match s {
                    Term::Blank(b) if self.inline.contains(b.as_str()) && !reached.contains(b.as_str()) => Some(b.as_str()),
                    _ => None,
                })
                .collect();
            if orphans.is_empty() {
                return;
            }
            orphans.sort_by_key(|b| ranks.get(*b).copied().unwrap_or(usize::MAX));
            let pick = orphans[0];
            self.inline.remove(pick);
            self.collections.remove(pick);
            // collections that ran through the promoted node are no longer pure
            let still: Vec<&str> = self.collections.iter().copied().filter(|h| self.is_collection(h)).collect();
            self.collections = still.into_iter().collect();
            let term = self.by_subject.keys().copied().find(|t| matches!(t, Term::Blank(b) if b == pick));
            if let Some(t) = term {
                self.mark_reached(t, &mut reached);
            }
        }
    }

    fn mark_reached(&self, subject: &'g Term, reached: &mut HashSet<&'g str>) {
        let mut stack = vec![subject];
        while let Some(s) = stack.pop() {
            if let Some(ts) = self.by_subject.get(s) {
                for t in ts {
                    if let Term::Blank(b) = &t.object {
                        if self.inline.contains(b.as_str()) && reached.insert(b.as_str()) {
                            stack.push(&t.object);
                        }
                    }
                }
            }
        }
    }

    fn iri(&self, iri: &str) -> String {
        let best = self
            .prefixes
            .iter()
            .filter(|(_, ns)| iri.starts_with(*ns) && valid_local(&iri[ns.len()..]))
            .max_by_key(|(p, ns)| (ns.len(), std::cmp::Reverse(*p)));
        match best {
            Some((p, ns)) => format!("{p}:{}", &iri[ns.len()..]),
            None => format!("<{iri}>"),
        }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Iri(i) => self.iri(i),
            Term::Str(s) => format!("\"{}\"", escape_string(s)),
            Term::Int(n) => n.to_string(),
            Term::Blank(b) => {
                if self.collections.contains(b.as_str()) {
                    let mut items = Vec::new();
                    let mut cur = b.clone();
                    loop {
                        let ts = self.subject_triples(&cur);
                        let first = ts.iter().find(|t| t.predicate == vocab::RDF_FIRST).expect("checked cell");
                        let rest = ts.iter().find(|t| t.predicate == vocab::RDF_REST).expect("checked cell");
                        items.push(self.term(&first.object));
                        match &rest.object {
                            Term::Blank(next) => cur = next.clone(),
                            _ => break,
                        }
                    }
                    format!("( {} )", items.join(" "))
                } else if self.inline.contains(b.as_str()) {
                    let ts = self.subject_triples(b);
                    if ts.is_empty() {
                        "[]".to_string()
                    } else {
                        format!("[ {} ]", self.predicate_objects(ts).join("; "))
                    }
                } else {
                    format!("_:{}", self.labels[b.as_str()])
                }
            }
        }
    }

    /// `pred obj, obj` groups, `a` first then predicates in IRI order.
    fn predicate_objects(&self, triples: &[&Triple]) -> Vec<String> {
        let mut groups: BTreeMap<(bool, &str), Vec<String>> = BTreeMap::new();
        for t in triples {
            let is_type = t.predicate == vocab::RDF_TYPE;
            groups.entry((!is_type, t.predicate.as_str())).or_default().push(self.term(&t.object));
        }
        groups
            .into_iter()
            .map(|((not_type, p), mut objs)| {
                objs.sort();
                let verb = if not_type { self.iri(p) } else { "a".to_string() };
                format!("{verb} {}", objs.join(", "))
            })
            .collect()
    }

    fn write(&self) -> String {
        let mut out = String::new();
        for (p, ns) in &self.prefixes {
            out.push_str(&format!("@prefix {p}: <{ns}> .\n"));
        }
        let mut blocks: Vec<(u8, String, String)> = Vec::new();
        for (subject, triples) in &self.by_subject {
            let (class, head) = match subject {
                Term::Blank(b) if self.inline.contains(b.as_str()) => continue,
                Term::Blank(b) => (1, format!("_:{}", self.labels[b.as_str()])),
                other => (0, self.term(other)),
            };
            let body = self.predicate_objects(triples).join(";\n    ");
            blocks.push((class, head.clone(), format!("{head} {body};\n    .\n")));
        }
        blocks.sort();
        for (_, _, block) in blocks {
            out.push('\n');
            out.push_str(&block);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::read_list;
    use vocab::*;

    const EX: &str = "http://example.org/";

    fn ex(local: &str) -> Term {
        Term::iri(format!("{EX}{local}"))
    }

    #[test]
    fn parses_sequence_listing() {
        let text = "@prefix : <http://example.org/> .
@prefix ore: <http://www.openarchives.org/ore/terms/> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
:mySequence a ore:Aggregation, rdf:List;
  ore:aggregates :page1, :page2, :page3;
  rdf:first :page1;
  rdf:rest (:page2 :page3 ) .";
        let g = parse_turtle(text).unwrap();
        let s = ex("mySequence");
        assert!(g.has_type(&s, ORE_AGGREGATION));
        assert!(g.has_type(&s, RDF_LIST));
        assert_eq!(read_list(&g, &s).unwrap(), vec![ex("page1"), ex("page2"), ex("page3")]);
        assert_eq!(g.objects(&s, ORE_AGGREGATES).count(), 3);
    }

    #[test]
    fn expands_collections() {
        let g = parse_turtle("@prefix : <http://example.org/> . :s :p ( :a :b ) .").unwrap();
        let head = g.objects(&ex("s"), &format!("{EX}p")).next().unwrap().clone();
        assert!(head.is_blank());
        assert_eq!(read_list(&g, &head).unwrap(), vec![ex("a"), ex("b")]);
        let blanks = g.nodes().into_iter().filter(|t| t.is_blank()).count();
        assert_eq!(blanks, 2);
        let g = parse_turtle("@prefix : <http://example.org/> . :s :p () .").unwrap();
        assert!(g.contains(&ex("s"), &format!("{EX}p"), &Term::iri(RDF_NIL)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_turtle("@prefix : <http://example.org/> .\n:x :y :z").unwrap_err();
        assert!(matches!(err, RdfError::Syntax { line: 2, col: 9, .. }), "{err:?}");
        let err = parse_turtle(":x :y :z .").unwrap_err();
        assert!(matches!(err, RdfError::UnknownPrefix { line: 1, col: 1, .. }), "{err:?}");
        assert!(parse_turtle("<a> <b> 1.5 .").is_err());
        assert!(parse_turtle("<a> <b> \"x\"@en .").is_err());
        assert!(parse_turtle("<a> <b> \"open .").is_err());
        assert!(parse_turtle("@base <http://x/> .").is_err());
        assert!(parse_turtle("<a> <b> [ <c> <d> .").is_err());
    }

    #[test]
    fn literals_and_blanks() {
        let g = parse_turtle(
            "# comment\n<http://x/s> <http://x/p> \"a \\\"q\\\"\\n\\u00e9\", -12, +3, _:one ; <http://x/q> _:one, [] .",
        )
        .unwrap();
        let s = Term::iri("http://x/s");
        let objs: Vec<&Term> = g.objects(&s, "http://x/p").collect();
        assert!(objs.contains(&&Term::Str("a \"q\"\n\u{e9}".into())));
        assert!(objs.contains(&&Term::Int(-12)));
        assert!(objs.contains(&&Term::Int(3)));
        assert_eq!(g.objects(&s, "http://x/q").count(), 2);
        // `_:one` is the same node under both predicates
        let shared = g.objects(&s, "http://x/p").find(|t| t.is_blank()).unwrap();
        assert!(g.contains(&s, "http://x/q", shared));
    }

    #[test]
    fn empty_graph_with_prefix() {
        let g = Graph::with_prefixes([("ex", EX)]);
        assert_eq!(serialize_turtle(&g), "@prefix ex: <http://example.org/> .\n");
    }

    #[test]
    fn writes_collections_and_inline_blanks() {
        let text = "@prefix : <http://example.org/> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
:seq rdf:first :p1; rdf:rest ( :p2 :p3 ); :has [ :k \"v\" ] .";
        let g = parse_turtle(text).unwrap();
        let out = serialize_turtle(&g);
        assert!(out.contains("rdf:rest ( :p2 :p3 );"), "{out}");
        assert!(out.contains(":has [ :k \"v\" ];"), "{out}");
        let back = parse_turtle(&out).unwrap();
        assert_eq!(back.len(), g.len());
        assert_eq!(serialize_turtle(&back), out);
    }

    #[test]
    fn shared_and_cyclic_blanks_survive() {
        let mut g = Graph::with_prefixes([("ex", EX)]);
        let a = Term::Blank("a".into());
        let b = Term::Blank("b".into());
        g.insert(ex("s"), &format!("{EX}p"), a.clone());
        g.insert(ex("t"), &format!("{EX}p"), a.clone());
        g.insert(a.clone(), &format!("{EX}v"), Term::Int(1));
        g.insert(b.clone(), &format!("{EX}next"), Term::Blank("c".into()));
        g.insert(Term::Blank("c".into()), &format!("{EX}next"), b.clone());
        let out = serialize_turtle(&g);
        let back = parse_turtle(&out).unwrap();
        assert_eq!(back.len(), g.len(), "{out}");
        assert_eq!(serialize_turtle(&back), out);
    }
}

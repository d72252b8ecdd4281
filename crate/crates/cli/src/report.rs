//! Ordered key–value trees and their two renderings.

use std::fmt::Write;

use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub key: String,
    pub value: Option<String>,
    pub children: Vec<Node>,
}

impl Node {
    pub fn leaf(key: impl Into<String>, value: impl ToString) -> Node {
        Node { key: key.into(), value: Some(value.to_string()), children: Vec::new() }
    }

    pub fn branch(key: impl Into<String>) -> Node {
        Node { key: key.into(), value: None, children: Vec::new() }
    }

    pub fn push(&mut self, child: Node) -> &mut Node {
        self.children.push(child);
        self
    }

    pub fn with(mut self, child: Node) -> Node {
        self.children.push(child);
        self
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Node {
        self.push(Node::leaf(key, value))
    }

    /// First child with the given key.
    pub fn get(&self, key: &str) -> Option<&Node> {
        self.children.iter().find(|c| c.key == key)
    }

    /// Follows a `/`-separated path of keys.
    pub fn lookup(&self, path: &str) -> Option<&Node> {
        path.split('/').try_fold(self, |n, k| n.get(k))
    }

    /// Follows keys that may themselves contain `/`.
    pub fn at(&self, keys: &[&str]) -> Option<&Node> {
        keys.iter().try_fold(self, |n, k| n.get(k))
    }

    pub fn value_at(&self, path: &str) -> Option<&str> {
        self.lookup(path)?.value.as_deref()
    }
}

/// A tool report: header fields followed by sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub root: Node,
}

pub fn digest(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in d {
        write!(s, "{b:02x}").expect("string write");
    }
    s
}

impl Report {
    pub fn new(command: &str, inputs: &[(String, Vec<u8>)]) -> Report {
        let mut root = Node::branch("report");
        root.add("tool", format!("hypglue {}", env!("CARGO_PKG_VERSION")));
        root.add("command", command);
        let mut all = Sha256::new();
        let mut list = Node::branch("inputs");
        for (name, bytes) in inputs {
            let d = digest(bytes);
            all.update(d.as_bytes());
            list.push(Node::leaf(name.clone(), format!("sha256:{d}")));
        }
        root.push(list);
        let mut s = String::new();
        for b in all.finalize() {
            write!(s, "{b:02x}").expect("string write");
        }
        root.add("digest", format!("sha256:{s}"));
        Report { root }
    }

    pub fn section(&mut self, node: Node) {
        self.root.push(node);
    }

    pub fn get(&self, path: &str) -> Option<&Node> {
        self.root.lookup(path)
    }

    pub fn at(&self, keys: &[&str]) -> Option<&Node> {
        self.root.at(keys)
    }

    pub fn value(&self, path: &str) -> Option<&str> {
        self.root.value_at(path)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.root.children {
            text(c, 0, &mut out);
        }
        out
    }

    pub fn to_json_like(&self) -> String {
        let mut out = String::new();
        bracketed(&self.root.children, 0, &mut out);
        out.push('\n');
        out
    }
}

fn text(n: &Node, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match &n.value {
        Some(v) if v.contains('\n') => {
            writeln!(out, "{pad}{}: |", n.key).expect("string write");
            for line in v.lines() {
                writeln!(out, "{pad}  {line}").expect("string write");
            }
        }
        Some(v) => writeln!(out, "{pad}{}: {v}", n.key).expect("string write"),
        None => writeln!(out, "{pad}{}:", n.key).expect("string write"),
    }
    for c in &n.children {
        text(c, depth + 1, out);
    }
}

fn quote(s: &str) -> String {
    let mut q = String::from("\"");
    for ch in s.chars() {
        match ch {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            c => q.push(c),
        }
    }
    q.push('"');
    q
}

fn bracketed(children: &[Node], depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth + 1);
    out.push('{');
    for (i, c) in children.iter().enumerate() {
        out.push('\n');
        out.push_str(&pad);
        out.push_str(&quote(&c.key));
        out.push_str(": ");
        match (&c.value, c.children.is_empty()) {
            (Some(v), true) => out.push_str(&quote(v)),
            (None, true) => out.push_str("{}"),
            (v, false) => {
                if let Some(v) = v {
                    let mut all = vec![Node::leaf("value", v)];
                    all.extend(c.children.iter().cloned());
                    bracketed(&all, depth + 1, out);
                } else {
                    bracketed(&c.children, depth + 1, out);
                }
            }
        }
        if i + 1 < children.len() {
            out.push(',');
        }
    }
    if !children.is_empty() {
        out.push('\n');
        out.push_str(&"  ".repeat(depth));
    }
    out.push('}');
}

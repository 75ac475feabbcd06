//! A recognizer for the DOT language, following the published grammar:
//!
//! ```text
//! graph     : [strict] (graph | digraph) [ID] '{' stmt_list '}'
//! stmt_list : [ stmt [';'] stmt_list ]
//! stmt      : node_stmt | edge_stmt | attr_stmt | ID '=' ID | subgraph
//! attr_stmt : (graph | node | edge) attr_list
//! attr_list : '[' [a_list] ']' [attr_list]
//! a_list    : ID '=' ID [(';' | ',')] [a_list]
//! edge_stmt : (node_id | subgraph) edgeRHS [attr_list]
//! edgeRHS   : edgeop (node_id | subgraph) [edgeRHS]
//! node_stmt : node_id [attr_list]
//! node_id   : ID [port]
//! port      : ':' ID [':' ID]
//! subgraph  : [subgraph [ID]] '{' stmt_list '}'
//! ```
//!
//! Keywords are case-insensitive; `->` is only legal in a digraph and `--`
//! only in a graph. Returns the node IDs seen, per graph, in order.

#[derive(Debug, Clone, PartialEq)]
enum T {
    Id(String),
    Kw(String),
    Sym(&'static str),
}

const KEYWORDS: [&str; 6] = ["strict", "graph", "digraph", "node", "edge", "subgraph"];

fn lex(s: &str) -> Result<Vec<T>, String> {
    let c: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < c.len() {
        let ch = c[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch == '/' && c.get(i + 1) == Some(&'/') || ch == '#' {
            while i < c.len() && c[i] != '\n' {
                i += 1;
            }
        } else if ch == '/' && c.get(i + 1) == Some(&'*') {
            i += 2;
            while i + 1 < c.len() && !(c[i] == '*' && c[i + 1] == '/') {
                i += 1;
            }
            if i + 1 >= c.len() {
                return Err("unterminated comment".into());
            }
            i += 2;
        } else if ch == '"' {
            let mut v = String::new();
            i += 1;
            loop {
                match c.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') if c.get(i + 1) == Some(&'"') => {
                        v.push('"');
                        i += 2;
                    }
                    Some(&x) => {
                        v.push(x);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(T::Id(v));
        } else if ch == '-' && matches!(c.get(i + 1), Some('>') | Some('-')) {
            out.push(T::Sym(if c[i + 1] == '>' { "->" } else { "--" }));
            i += 2;
        } else if ch.is_ascii_digit() || ch == '.' || ch == '-' {
            let start = i;
            i += 1;
            while i < c.len() && (c[i].is_ascii_digit() || c[i] == '.') {
                i += 1;
            }
            let v: String = c[start..i].iter().collect();
            if v == "-" || v == "." || v.matches('.').count() > 1 {
                return Err(format!("bad numeral {v:?}"));
            }
            out.push(T::Id(v));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < c.len() && (c[i].is_alphanumeric() || c[i] == '_') {
                i += 1;
            }
            let v: String = c[start..i].iter().collect();
            let lower = v.to_ascii_lowercase();
            out.push(if KEYWORDS.contains(&lower.as_str()) { T::Kw(lower) } else { T::Id(v) });
        } else {
            let sym = match ch {
                '{' => "{",
                '}' => "}",
                '[' => "[",
                ']' => "]",
                ';' => ";",
                ',' => ",",
                '=' => "=",
                ':' => ":",
                other => return Err(format!("unexpected character {other:?}")),
            };
            out.push(T::Sym(sym));
            i += 1;
        }
    }
    Ok(out)
}

struct P {
    t: Vec<T>,
    i: usize,
    directed: bool,
    nodes: Vec<String>,
}

impl P {
    fn peek(&self) -> Option<&T> {
        self.t.get(self.i)
    }

    fn sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(T::Sym(x)) if *x == s)
    }

    fn kw(&self, s: &str) -> bool {
        matches!(self.peek(), Some(T::Kw(x)) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> Result<(), String> {
        if self.sym(s) {
            self.i += 1;
            Ok(())
        } else {
            Err(format!("expected {s:?} at token {}, found {:?}", self.i, self.peek()))
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(T::Id(v)) => {
                let v = v.clone();
                self.i += 1;
                Ok(v)
            }
            other => Err(format!("expected an ID at token {}, found {other:?}", self.i)),
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if self.kw("strict") {
            self.i += 1;
        }
        self.directed = if self.kw("digraph") {
            true
        } else if self.kw("graph") {
            false
        } else {
            return Err(format!("expected graph or digraph, found {:?}", self.peek()));
        };
        self.i += 1;
        if matches!(self.peek(), Some(T::Id(_))) {
            self.i += 1;
        }
        self.eat_sym("{")?;
        self.stmt_list()?;
        self.eat_sym("}")
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while !self.sym("}") {
            if self.peek().is_none() {
                return Err("unexpected end of input".into());
            }
            self.stmt()?;
            if self.sym(";") {
                self.i += 1;
            }
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), String> {
        if self.kw("graph") || self.kw("node") || self.kw("edge") {
            self.i += 1;
            return self.attr_list();
        }
        if matches!(self.peek(), Some(T::Id(_))) && matches!(self.t.get(self.i + 1), Some(T::Sym("="))) {
            self.id()?;
            self.eat_sym("=")?;
            self.id()?;
            return Ok(());
        }
        self.endpoint()?;
        if self.sym("->") || self.sym("--") {
            while self.sym("->") || self.sym("--") {
                let want = if self.directed { "->" } else { "--" };
                self.eat_sym(want)?;
                self.endpoint()?;
            }
        }
        if self.sym("[") {
            self.attr_list()?;
        }
        Ok(())
    }

    fn endpoint(&mut self) -> Result<(), String> {
        if self.kw("subgraph") || self.sym("{") {
            return self.subgraph();
        }
        let id = self.id()?;
        self.nodes.push(id);
        if self.sym(":") {
            self.i += 1;
            self.id()?;
            if self.sym(":") {
                self.i += 1;
                self.id()?;
            }
        }
        Ok(())
    }

    fn subgraph(&mut self) -> Result<(), String> {
        if self.kw("subgraph") {
            self.i += 1;
            if matches!(self.peek(), Some(T::Id(_))) {
                self.i += 1;
            }
        }
        self.eat_sym("{")?;
        self.stmt_list()?;
        self.eat_sym("}")
    }

    fn attr_list(&mut self) -> Result<(), String> {
        self.eat_sym("[")?;
        while !self.sym("]") {
            self.id()?;
            self.eat_sym("=")?;
            self.id()?;
            if self.sym(";") || self.sym(",") {
                self.i += 1;
            }
        }
        self.eat_sym("]")?;
        if self.sym("[") {
            self.attr_list()?;
        }
        Ok(())
    }
}

/// Accept a file of one or more graphs.
pub fn check(text: &str) -> Result<Vec<Vec<String>>, String> {
    let t = lex(text)?;
    let mut p = P {
        t,
        i: 0,
        directed: false,
        nodes: Vec::new(),
    };
    let mut graphs = Vec::new();
    while p.peek().is_some() {
        p.graph()?;
        graphs.push(std::mem::take(&mut p.nodes));
    }
    if graphs.is_empty() {
        return Err("no graph".into());
    }
    Ok(graphs)
}

#[test]
fn recognizer_rejects_broken_input() {
    assert!(check("digraph { a -> b; }").is_ok());
    assert!(check("graph g { a -- b [color=red, style=bold] }").is_ok());
    assert!(check("digraph { a -- b }").is_err());
    assert!(check("digraph { a -> }").is_err());
    assert!(check("digraph { \"a\" [label=] }").is_err());
    assert!(check("digraph { a -> b").is_err());
    assert!(check("digraph { \"open }").is_err());
    assert!(check("").is_err());
}

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Or,
    Xor,
    And,
    /// `a AND NOT b`
    And2,
    Xnor,
    /// `IF(a, b, c)` is `b` when `a` holds, else `c`.
    If,
    Not,
}

impl Operator {
    pub const ALL: [Operator; 7] = [
        Operator::Or,
        Operator::Xor,
        Operator::And,
        Operator::And2,
        Operator::Xnor,
        Operator::If,
        Operator::Not,
    ];

    #[inline]
    pub fn arity(self) -> usize {
        match self {
            Operator::Not => 1,
            Operator::If => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Operator::Or => "OR",
            Operator::Xor => "XOR",
            Operator::And => "AND",
            Operator::And2 => "AND2",
            Operator::Xnor => "XNOR",
            Operator::If => "IF",
            Operator::Not => "NOT",
        }
    }

    fn from_name(s: &str) -> Option<Operator> {
        Operator::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(s))
    }

    /// Word-parallel application; `args.len()` must equal the arity.
    #[inline]
    pub fn apply_word(self, args: &[u64]) -> u64 {
        match self {
            Operator::Or => args[0] | args[1],
            Operator::Xor => args[0] ^ args[1],
            Operator::And => args[0] & args[1],
            Operator::And2 => args[0] & !args[1],
            Operator::Xnor => !(args[0] ^ args[1]),
            Operator::If => (args[0] & args[1]) | (!args[0] & args[2]),
            Operator::Not => !args[0],
        }
    }

    pub fn apply(self, args: &[bool]) -> bool {
        let words: Vec<u64> = args.iter().map(|&b| b as u64).collect();
        self.apply_word(&words) & 1 == 1
    }
}

/// Leaf symbol. Variables are zero-based: `Var(0)` is `x1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Terminal {
    Var(u8),
    Seed(u8),
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Terminal::Var(i) => write!(f, "x{}", *i as usize + 1),
            Terminal::Seed(k) => write!(f, "f{}", *k as usize + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Op(Operator),
    Leaf(Terminal),
}

impl Node {
    #[inline]
    pub fn arity(self) -> usize {
        match self {
            Node::Op(op) => op.arity(),
            Node::Leaf(_) => 0,
        }
    }
}

/// Which leaves a tree may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeMode {
    /// Variables `x1..x(vars)`.
    Direct { vars: usize },
    /// Seeds `f1..f4` of `seed_vars` variables plus `x(seed_vars+1)`, `x(seed_vars+2)`.
    Construction { seed_vars: usize },
}

impl TreeMode {
    pub fn terminals(&self) -> Vec<Terminal> {
        match *self {
            TreeMode::Direct { vars } => (0..vars).map(|i| Terminal::Var(i as u8)).collect(),
            TreeMode::Construction { seed_vars } => (0..4)
                .map(Terminal::Seed)
                .chain([
                    Terminal::Var(seed_vars as u8),
                    Terminal::Var(seed_vars as u8 + 1),
                ])
                .collect(),
        }
    }

    pub fn allows(&self, t: Terminal) -> bool {
        match (*self, t) {
            (TreeMode::Direct { vars }, Terminal::Var(i)) => (i as usize) < vars,
            (TreeMode::Direct { .. }, Terminal::Seed(_)) => false,
            (TreeMode::Construction { .. }, Terminal::Seed(k)) => k < 4,
            (TreeMode::Construction { seed_vars }, Terminal::Var(i)) => {
                i as usize == seed_vars || i as usize == seed_vars + 1
            }
        }
    }
}

/// A rooted ordered tree stored in prefix order. The subtree rooted at
/// node `i` occupies the contiguous range `i..subtree_end(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SyntaxTree {
    nodes: Vec<Node>,
}

impl SyntaxTree {
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self> {
        let mut need = 1usize;
        for (i, node) in nodes.iter().enumerate() {
            if need == 0 {
                return Err(Error::InvalidTree(format!(
                    "trailing nodes after position {i}"
                )));
            }
            need = need - 1 + node.arity();
        }
        if need != 0 || nodes.is_empty() {
            return Err(Error::InvalidTree("incomplete prefix sequence".into()));
        }
        Ok(SyntaxTree { nodes })
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<Node>) -> Self {
        debug_assert!(SyntaxTree::from_nodes(nodes.clone()).is_ok());
        SyntaxTree { nodes }
    }

    pub fn leaf(t: Terminal) -> Self {
        SyntaxTree {
            nodes: vec![Node::Leaf(t)],
        }
    }

    pub fn var(i: usize) -> Self {
        SyntaxTree::leaf(Terminal::Var(i as u8))
    }

    pub fn op(op: Operator, children: Vec<SyntaxTree>) -> Result<Self> {
        if children.len() != op.arity() {
            return Err(Error::InvalidTree(format!(
                "{} takes {} arguments, got {}",
                op.name(),
                op.arity(),
                children.len()
            )));
        }
        let mut nodes = vec![Node::Op(op)];
        for c in children {
            nodes.extend(c.nodes);
        }
        Ok(SyntaxTree { nodes })
    }

    #[inline]
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn subtree_end(&self, i: usize) -> usize {
        let mut need = 1usize;
        let mut j = i;
        while need > 0 {
            need = need - 1 + self.nodes[j].arity();
            j += 1;
        }
        j
    }

    /// `subtree_end` for every node in one pass.
    pub fn subtree_ends(&self) -> Vec<usize> {
        let mut ends = vec![0; self.nodes.len()];
        let mut stack: Vec<usize> = Vec::new();
        for i in (0..self.nodes.len()).rev() {
            let a = self.nodes[i].arity();
            ends[i] = if a == 0 {
                i + 1
            } else {
                let last_child = stack[stack.len() - a];
                ends[last_child]
            };
            stack.truncate(stack.len() - a);
            stack.push(i);
        }
        ends
    }

    /// Depth of every node, the root at depth 0.
    pub fn node_depths(&self) -> Vec<usize> {
        let mut depths = Vec::with_capacity(self.nodes.len());
        // Remaining child slots per open ancestor.
        let mut open: Vec<usize> = Vec::new();
        for node in &self.nodes {
            depths.push(open.len());
            if let Some(last) = open.last_mut() {
                *last -= 1;
            }
            let a = node.arity();
            if a > 0 {
                open.push(a);
            } else {
                while open.last() == Some(&0) {
                    open.pop();
                }
            }
        }
        depths
    }

    /// Longest root-to-leaf path counted in edges; a single leaf has depth 0.
    pub fn depth(&self) -> usize {
        self.node_depths().into_iter().max().unwrap_or(0)
    }

    /// Start indices of the children of node `i`.
    pub fn children(&self, i: usize, ends: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes[i].arity());
        let mut c = i + 1;
        for _ in 0..self.nodes[i].arity() {
            out.push(c);
            c = ends[c];
        }
        out
    }

    pub fn subtree(&self, i: usize) -> SyntaxTree {
        SyntaxTree {
            nodes: self.nodes[i..self.subtree_end(i)].to_vec(),
        }
    }

    pub fn replace_subtree(&self, i: usize, replacement: &[Node]) -> SyntaxTree {
        let end = self.subtree_end(i);
        let mut nodes = Vec::with_capacity(self.nodes.len() - (end - i) + replacement.len());
        nodes.extend_from_slice(&self.nodes[..i]);
        nodes.extend_from_slice(replacement);
        nodes.extend_from_slice(&self.nodes[end..]);
        SyntaxTree { nodes }
    }

    pub fn terminals(&self) -> impl Iterator<Item = Terminal> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Leaf(t) => Some(*t),
            Node::Op(_) => None,
        })
    }

    /// Checks leaf legality for `mode` and the depth cap.
    pub fn validate(&self, mode: TreeMode, max_depth: usize) -> Result<()> {
        if let Some(t) = self.terminals().find(|&t| !mode.allows(t)) {
            return Err(Error::InvalidTree(format!(
                "leaf {t} is not allowed in {mode:?}"
            )));
        }
        let d = self.depth();
        if d > max_depth {
            return Err(Error::InvalidTree(format!(
                "depth {d} exceeds cap {max_depth}"
            )));
        }
        Ok(())
    }

    fn write_prefix(&self, i: usize, out: &mut String) -> usize {
        match self.nodes[i] {
            Node::Leaf(t) => {
                out.push_str(&t.to_string());
                i + 1
            }
            Node::Op(op) => {
                out.push_str(op.name());
                out.push('(');
                let mut c = i + 1;
                for k in 0..op.arity() {
                    if k > 0 {
                        out.push(',');
                    }
                    c = self.write_prefix(c, out);
                }
                out.push(')');
                c
            }
        }
    }
}

/// Evaluates the tree at one assignment; `assignment[j]` is `x(j+1)`.
pub fn eval_tree(tree: &SyntaxTree, assignment: &[bool]) -> Result<bool> {
    let mut stack: Vec<bool> = Vec::with_capacity(tree.len());
    for node in tree.nodes.iter().rev() {
        match *node {
            Node::Leaf(Terminal::Var(j)) => {
                let v = *assignment
                    .get(j as usize)
                    .ok_or(Error::UnboundVariable(j as usize + 1))?;
                stack.push(v);
            }
            Node::Leaf(Terminal::Seed(k)) => {
                return Err(Error::InvalidTree(format!(
                    "seed leaf f{} needs a construction context",
                    k + 1
                )))
            }
            Node::Op(op) => {
                let a = op.arity();
                let mut args = [false; 3];
                for slot in args.iter_mut().take(a) {
                    *slot = stack.pop().expect("well-formed tree");
                }
                stack.push(op.apply(&args[..a]));
            }
        }
    }
    Ok(stack[0])
}

impl fmt::Display for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_prefix(0, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SyntaxTree({self})")
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    nodes: Vec<Node>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::TreeParse(format!("{msg} at offset {}", self.pos))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a symbol"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn node(&mut self) -> Result<()> {
        let ident = self.ident()?.to_string();
        if let Some(op) = Operator::from_name(&ident) {
            self.nodes.push(Node::Op(op));
            self.expect('(')?;
            for k in 0..op.arity() {
                if k > 0 {
                    self.expect(',')?;
                }
                self.node()?;
            }
            return self.expect(')');
        }
        let (kind, digits) = ident.split_at(1);
        let index: usize = digits
            .parse()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| self.err(&format!("unknown symbol {ident:?}")))?;
        let t = match kind {
            "x" | "X" if index <= 256 => Terminal::Var((index - 1) as u8),
            "f" | "F" if index <= 4 => Terminal::Seed((index - 1) as u8),
            _ => return Err(self.err(&format!("unknown symbol {ident:?}"))),
        };
        self.nodes.push(Node::Leaf(t));
        Ok(())
    }
}

impl FromStr for SyntaxTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s,
            pos: 0,
            nodes: Vec::new(),
        };
        p.node()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        SyntaxTree::from_nodes(p.nodes)
    }
}

//! Lexer and recursive-descent parser for PubMed Boolean queries.
//!
//! Precedence is `NOT` > `AND` > `OR`. Runs of the same operator at one
//! level flatten into a single n-ary node; parenthesised groups are kept as
//! written. Two operands with no operator between them (`a[tiab] "b c"`)
//! are joined by an implicit `AND`, as PubMed does.

use super::{AtomTerm, FieldTag, QueryNode};
use thiserror::Error;

/// Parenthesis depth plus `NOT`-chain length accepted before giving up.
pub const MAX_NESTING: usize = 256;

/// Parse failure. Positions are byte offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unbalanced parenthesis at byte {0}")]
    UnbalancedParenthesis(usize),
    #[error("unterminated quote starting at byte {0}")]
    UnterminatedQuote(usize),
    #[error("operator at byte {0} is missing an operand")]
    DanglingOperator(usize),
    #[error("empty query")]
    EmptyQuery,
    #[error("empty group at byte {0}")]
    EmptyGroup(usize),
    #[error("term at byte {0} is empty")]
    EmptyTerm(usize),
    #[error("unterminated field tag starting at byte {0}")]
    UnterminatedFieldTag(usize),
    #[error("field tag at byte {0} does not follow a term")]
    MisplacedFieldTag(usize),
    #[error("unexpected `]` at byte {0}")]
    StrayBracket(usize),
    #[error("query nests deeper than {MAX_NESTING} levels at byte {0}")]
    NestingTooDeep(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    And,
    Or,
    Not,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    LParen,
    RParen,
    Op(Op),
    Word(String),
    Quoted(String),
    Tag(String),
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '"' | '[' | ']')
}

fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let kind = match c {
            '(' => {
                chars.next();
                TokenKind::LParen
            }
            ')' => {
                chars.next();
                TokenKind::RParen
            }
            ']' => return Err(ParseError::StrayBracket(pos)),
            '"' | '[' => {
                let close = if c == '"' { '"' } else { ']' };
                chars.next();
                let mut body = String::new();
                let mut closed = false;
                for (_, ch) in chars.by_ref() {
                    if ch == close {
                        closed = true;
                        break;
                    }
                    body.push(ch);
                }
                match (closed, c) {
                    (false, '"') => return Err(ParseError::UnterminatedQuote(pos)),
                    (false, _) => return Err(ParseError::UnterminatedFieldTag(pos)),
                    (true, '"') => TokenKind::Quoted(body),
                    (true, _) => TokenKind::Tag(body),
                }
            }
            _ => {
                let mut word = String::new();
                while let Some(&(_, ch)) = chars.peek() {
                    if !is_word_char(ch) {
                        break;
                    }
                    word.push(ch);
                    chars.next();
                }
                if word.eq_ignore_ascii_case("and") {
                    TokenKind::Op(Op::And)
                } else if word.eq_ignore_ascii_case("or") {
                    TokenKind::Op(Op::Or)
                } else if word.eq_ignore_ascii_case("not") {
                    TokenKind::Op(Op::Not)
                } else {
                    TokenKind::Word(word)
                }
            }
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}

/// Parses a PubMed-syntax Boolean query.
pub fn parse_boolean(raw: &str) -> Result<QueryNode, ParseError> {
    let tokens = lex(raw)?;
    if tokens.is_empty() {
        return Err(ParseError::EmptyQuery);
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        depth: 0,
    };
    let node = parser.parse_or()?;
    match parser.peek() {
        None => Ok(node),
        Some(tok) => Err(match tok.kind {
            TokenKind::RParen => ParseError::UnbalancedParenthesis(tok.pos),
            TokenKind::Tag(_) => ParseError::MisplacedFieldTag(tok.pos),
            _ => ParseError::DanglingOperator(tok.pos),
        }),
    }
}

struct Parser {
    tokens: Vec<Token>,
    cursor: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor)
    }

    fn peek_op(&self) -> Option<Op> {
        match self.peek()?.kind {
            TokenKind::Op(op) => Some(op),
            _ => None,
        }
    }

    fn starts_operand(&self) -> bool {
        matches!(
            self.peek().map(|t| &t.kind),
            Some(TokenKind::LParen | TokenKind::Word(_) | TokenKind::Quoted(_))
        )
    }

    /// Consumes an operator and checks that an operand follows it.
    fn take_operator(&mut self) -> Result<(), ParseError> {
        let pos = self.tokens[self.cursor].pos;
        self.cursor += 1;
        match self.peek().map(|t| &t.kind) {
            None | Some(TokenKind::RParen) | Some(TokenKind::Op(_)) => {
                Err(ParseError::DanglingOperator(pos))
            }
            _ => Ok(()),
        }
    }

    fn parse_or(&mut self) -> Result<QueryNode, ParseError> {
        let mut children = vec![self.parse_and()?];
        while self.peek_op() == Some(Op::Or) {
            self.take_operator()?;
            children.push(self.parse_and()?);
        }
        Ok(collapse(children, QueryNode::Or))
    }

    fn parse_and(&mut self) -> Result<QueryNode, ParseError> {
        let mut children = vec![self.parse_not()?];
        loop {
            if self.peek_op() == Some(Op::And) {
                self.take_operator()?;
            } else if !self.starts_operand() {
                break;
            }
            children.push(self.parse_not()?);
        }
        Ok(collapse(children, QueryNode::And))
    }

    fn parse_not(&mut self) -> Result<QueryNode, ParseError> {
        let mut node = self.parse_primary()?;
        let mut chain = 0;
        while self.peek_op() == Some(Op::Not) {
            let pos = self.tokens[self.cursor].pos;
            chain += 1;
            if self.depth + chain > MAX_NESTING {
                return Err(ParseError::NestingTooDeep(pos));
            }
            self.take_operator()?;
            let negative = self.parse_primary()?;
            node = QueryNode::not(node, negative);
        }
        Ok(node)
    }

    fn parse_primary(&mut self) -> Result<QueryNode, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            // Only reachable after an operator, which take_operator rejects.
            return Err(ParseError::EmptyQuery);
        };
        match tok.kind {
            TokenKind::LParen => {
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(ParseError::NestingTooDeep(tok.pos));
                }
                self.cursor += 1;
                match self.peek().map(|t| &t.kind) {
                    Some(TokenKind::RParen) => return Err(ParseError::EmptyGroup(tok.pos)),
                    None => return Err(ParseError::UnbalancedParenthesis(tok.pos)),
                    _ => {}
                }
                let inner = self.parse_or()?;
                match self.peek() {
                    Some(Token {
                        kind: TokenKind::RParen,
                        ..
                    }) => self.cursor += 1,
                    Some(Token {
                        kind: TokenKind::Tag(_),
                        pos,
                    }) => return Err(ParseError::MisplacedFieldTag(*pos)),
                    _ => return Err(ParseError::UnbalancedParenthesis(tok.pos)),
                }
                self.depth -= 1;
                if let Some(Token {
                    kind: TokenKind::Tag(_),
                    pos,
                }) = self.peek()
                {
                    return Err(ParseError::MisplacedFieldTag(*pos));
                }
                Ok(inner)
            }
            TokenKind::RParen => Err(ParseError::UnbalancedParenthesis(tok.pos)),
            TokenKind::Op(_) => Err(ParseError::DanglingOperator(tok.pos)),
            TokenKind::Tag(_) => Err(ParseError::MisplacedFieldTag(tok.pos)),
            TokenKind::Quoted(body) => {
                self.cursor += 1;
                let text = body.split_whitespace().collect::<Vec<_>>().join(" ");
                self.finish_atom(text, true, tok.pos)
            }
            TokenKind::Word(first) => {
                self.cursor += 1;
                let mut words = vec![first];
                while let Some(Token {
                    kind: TokenKind::Word(w),
                    ..
                }) = self.peek()
                {
                    words.push(w.clone());
                    self.cursor += 1;
                }
                self.finish_atom(words.join(" "), false, tok.pos)
            }
        }
    }

    fn finish_atom(
        &mut self,
        text: String,
        is_phrase: bool,
        pos: usize,
    ) -> Result<QueryNode, ParseError> {
        let stripped = text.trim_end_matches(|c: char| c == '*' || c.is_whitespace());
        let truncated = stripped.len() != text.len();
        if stripped.is_empty() {
            return Err(ParseError::EmptyTerm(pos));
        }
        let field = match self.peek() {
            Some(Token {
                kind: TokenKind::Tag(raw),
                ..
            }) => {
                let field = FieldTag::from_raw(raw);
                self.cursor += 1;
                field
            }
            _ => FieldTag::untagged(),
        };
        Ok(QueryNode::Atom(AtomTerm {
            text: stripped.to_string(),
            is_phrase,
            truncated,
            field,
        }))
    }
}

fn collapse(mut children: Vec<QueryNode>, make: fn(Vec<QueryNode>) -> QueryNode) -> QueryNode {
    if children.len() == 1 {
        children.pop().expect("one child")
    } else {
        make(children)
    }
}

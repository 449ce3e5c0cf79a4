//! Hand-written recursive-descent parser for query expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := and ("||" and)*
//! and     := unary ("&&" unary)*
//! unary   := "!" unary | primary
//! primary := "(" expr ")" | "true"
//!          | "outcome" "==" IDENT | "index" "==" UINT | "tag" "==" IDENT
//! IDENT   := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Whitespace is allowed between tokens.

use std::fmt;

use thiserror::Error;

use crate::model::Query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct QueryParseError {
    /// 1-based character position of the error.
    pub position: usize,
    pub message: String,
}

pub fn parse_query(text: &str) -> Result<Query, QueryParseError> {
    let mut parser = QueryParser { text, pos: 0 };
    let query = parser.or_expr()?;
    parser.skip_ws();
    if parser.pos < parser.text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(query)
}

struct QueryParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> QueryParser<'a> {
    fn error(&self, message: impl fmt::Display) -> QueryParseError {
        QueryParseError {
            position: self.text[..self.pos].chars().count() + 1,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    /// Consumes `token` if the input continues with it.
    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn or_expr(&mut self) -> Result<Query, QueryParseError> {
        let mut query = self.and_expr()?;
        loop {
            self.skip_ws();
            if self.eat("||") {
                query = query.or(self.and_expr()?);
            } else {
                return Ok(query);
            }
        }
    }

    fn and_expr(&mut self) -> Result<Query, QueryParseError> {
        let mut query = self.unary()?;
        loop {
            self.skip_ws();
            if self.eat("&&") {
                query = query.and(self.unary()?);
            } else {
                return Ok(query);
            }
        }
    }

    fn unary(&mut self) -> Result<Query, QueryParseError> {
        self.skip_ws();
        if self.eat("!") {
            Ok(self.unary()?.not())
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Query, QueryParseError> {
        self.skip_ws();
        if self.eat("(") {
            let query = self.or_expr()?;
            self.skip_ws();
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(query);
        }
        let word = match self.ident() {
            Some(word) => word,
            None => {
                return Err(
                    self.error("expected `outcome==`, `index==`, `tag==`, `true`, `!`, or `(`")
                )
            }
        };
        match word {
            "true" => Ok(Query::True),
            "outcome" => {
                self.equals()?;
                let label = self
                    .ident_after_ws()
                    .ok_or_else(|| self.error("expected identifier after `outcome==`"))?;
                Ok(Query::OutcomeIs(label.to_string()))
            }
            "tag" => {
                self.equals()?;
                let tag = self
                    .ident_after_ws()
                    .ok_or_else(|| self.error("expected identifier after `tag==`"))?;
                Ok(Query::TagIs(tag.to_string()))
            }
            "index" => {
                self.equals()?;
                self.skip_ws();
                let n = self.uint()?;
                Ok(Query::IndexIs(n))
            }
            other => Err(self.error(format_args!(
                "unknown predicate `{other}`, expected `outcome`, `index`, `tag`, or `true`"
            ))),
        }
    }

    fn equals(&mut self) -> Result<(), QueryParseError> {
        self.skip_ws();
        if self.eat("==") {
            Ok(())
        } else {
            Err(self.error("expected `==`"))
        }
    }

    fn ident_after_ws(&mut self) -> Option<&'a str> {
        self.skip_ws();
        self.ident()
    }

    /// Consumes `[A-Za-z_][A-Za-z0-9_]*` without skipping leading whitespace.
    fn ident(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let mut len = 0;
        for (i, c) in rest.char_indices() {
            let valid = if i == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !valid {
                break;
            }
            len = i + c.len_utf8();
        }
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn uint(&mut self) -> Result<u64, QueryParseError> {
        let rest = self.rest();
        let end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(self.error("expected an unsigned integer"));
        }
        let value: u64 = rest[..end]
            .parse()
            .map_err(|_| self.error("integer literal out of range"))?;
        self.pos += end;
        Ok(value)
    }
}

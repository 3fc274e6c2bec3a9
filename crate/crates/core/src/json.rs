//! JSON AST encoding:
//! `{"kind":"singleton"} | {"kind":"concat","parts":[..]} | {"kind":"shuffle","args":[..]}`.
//!
//! Decoding goes through the term constructors, so a decoded term is always
//! flattened and sorted.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::term::{Kind, Term};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Ast {
    Singleton,
    Concat { parts: Vec<Term> },
    Shuffle { args: Vec<Term> },
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let ast = match self.kind() {
            Kind::Singleton => Ast::Singleton,
            Kind::Concat(parts) => Ast::Concat {
                parts: parts.clone(),
            },
            Kind::Shuffle(args) => Ast::Shuffle { args: args.clone() },
        };
        ast.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match Ast::deserialize(deserializer)? {
            Ast::Singleton => Ok(Term::singleton()),
            Ast::Concat { parts } if parts.is_empty() => {
                Err(D::Error::custom("concat with no parts"))
            }
            Ast::Concat { parts } => Ok(Term::concat(parts)),
            Ast::Shuffle { args } if args.is_empty() => Err(D::Error::custom("empty shuffle")),
            Ast::Shuffle { args } => Ok(Term::shuffle(args)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_schema() {
        let t: Term = "sh(1, 1^1)".parse().unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"kind": "shuffle", "args": [
                {"kind": "singleton"},
                {"kind": "concat", "parts": [{"kind": "singleton"}, {"kind": "singleton"}]}
            ]})
        );
        let back: Term = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn decoding_normalizes_representation() {
        let v = serde_json::json!({"kind": "shuffle", "args": [
            {"kind": "concat", "parts": [
                {"kind": "singleton"},
                {"kind": "concat", "parts": [{"kind": "singleton"}, {"kind": "singleton"}]}
            ]},
            {"kind": "singleton"}
        ]});
        let t: Term = serde_json::from_value(v).unwrap();
        assert_eq!(t, "sh(1, 3)".parse().unwrap());
    }

    #[test]
    fn rejects_empty() {
        assert!(serde_json::from_str::<Term>(r#"{"kind":"shuffle","args":[]}"#).is_err());
        assert!(serde_json::from_str::<Term>(r#"{"kind":"concat","parts":[]}"#).is_err());
        assert!(serde_json::from_str::<Term>(r#"{"kind":"empty"}"#).is_err());
    }
}

//! Reference derivative expressions for small denominators, Jacobi substitution applied.

use crate::characteristic::Characteristic;
use crate::error::ParseError;
use crate::expr::ThetaExpression;

/// Raw corpus: `group | target | expression` per line, `DEGENERATE` for cases
/// the fundamental identity cannot produce. `J` stands for `θ[0;0] θ[1/2;0] θ[0;1/2]`.
pub const CORPUS: &str = include_str!("../data/golden_derivatives.txt");

const J: &str = "θ[0;0] θ[1/2;0] θ[0;1/2]";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenEntry {
    pub group: String,
    pub target: Characteristic,
    /// `None` for degenerate targets.
    pub expression: Option<ThetaExpression>,
}

pub fn parse_corpus(text: &str) -> Result<Vec<GoldenEntry>, ParseError> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        let [group, target, body] = parts.as_slice() else {
            return Err(ParseError::Expression(format!("bad corpus line `{line}`")));
        };
        let target: Characteristic = target.parse()?;
        let expression = if *body == "DEGENERATE" {
            None
        } else {
            let text = format!(" {body} ").replace(" J ", &format!(" {J} "));
            let mut e = ThetaExpression::parse_terms(target.clone(), &text)?;
            e.jacobi_applied = true;
            Some(e)
        };
        out.push(GoldenEntry {
            group: group.to_string(),
            target,
            expression,
        });
    }
    Ok(out)
}

/// The built-in corpus.
pub fn entries() -> Vec<GoldenEntry> {
    parse_corpus(CORPUS).expect("built-in corpus parses")
}

//! Row parsers for the bundle's TSV files. Each returns a bare reason on
//! failure; the caller attaches file name and line number.

use std::fmt;

use crate::ids::{IliId, Pos, SynsetId};
use crate::model::{Confidence, RelCode, Relation, RelationDef, Synset, Variant};
use crate::overlay::{Feature, FeatureId, SumoMapping};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError(pub String);

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for LineError {}

fn err<T>(msg: impl Into<String>) -> Result<T, LineError> {
    Err(LineError(msg.into()))
}

/// Marker for an absent optional value.
pub const NONE: &str = "-";

/// Splits on TAB and checks the column count lies in `min..=max`.
pub fn columns(line: &str, min: usize, max: usize) -> Result<Vec<&str>, LineError> {
    if line.contains('\r') {
        return err("carriage return in line (files must use LF line endings)");
    }
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < min || cols.len() > max {
        let expected = if min == max { min.to_string() } else { format!("{min}-{max}") };
        return err(format!("expected {expected} columns, found {}", cols.len()));
    }
    Ok(cols)
}

fn nonempty<'a>(field: &'a str, what: &str) -> Result<&'a str, LineError> {
    if field.is_empty() {
        err(format!("empty {what}"))
    } else {
        Ok(field)
    }
}

pub fn synset_id(field: &str) -> Result<SynsetId, LineError> {
    field.parse().map_err(|e| LineError(format!("bad synset id: {e}")))
}

pub fn ili_id(field: &str) -> Result<IliId, LineError> {
    field.parse().map_err(|e| LineError(format!("bad ILI id: {e}")))
}

fn optional(field: &str) -> Option<&str> {
    if field.is_empty() || field == NONE {
        None
    } else {
        Some(field)
    }
}

/// `ili_id`
pub fn parse_ili_line(line: &str) -> Result<IliId, LineError> {
    let c = columns(line, 1, 1)?;
    ili_id(c[0])
}

/// `code TAB name TAB inverse_code|- TAB transitive(0|1)`
pub fn parse_relation_def_line(line: &str) -> Result<RelationDef, LineError> {
    let c = columns(line, 4, 4)?;
    let transitive = match c[3] {
        "0" => false,
        "1" => true,
        other => return err(format!("transitive flag must be 0 or 1, found `{other}`")),
    };
    Ok(RelationDef {
        code: RelCode::new(nonempty(c[0], "relation code")?),
        name: nonempty(c[1], "relation name")?.to_string(),
        inverse: optional(c[2]).map(RelCode::new),
        transitive,
    })
}

/// `synset_id TAB pos TAB gloss|-`
pub fn parse_synset_line(line: &str) -> Result<Synset, LineError> {
    let c = columns(line, 3, 3)?;
    let id = synset_id(c[0])?;
    let pos: Pos = c[1].parse().map_err(|e| LineError(format!("{e}")))?;
    if pos != id.pos() {
        return err(format!("pos column `{pos}` disagrees with synset id {id}"));
    }
    Ok(Synset { id, gloss: optional(c[2]).map(str::to_string), examples: Vec::new() })
}

/// `lemma TAB synset_id TAB sense_index TAB confidence|- TAB source`
///
/// Spaces inside the lemma are kept as written.
pub fn parse_variant_line(line: &str) -> Result<Variant, LineError> {
    let c = columns(line, 5, 5)?;
    let lemma = nonempty(c[0], "lemma")?;
    let synset = synset_id(c[1])?;
    let sense_index: u32 = match c[2].parse() {
        Ok(n) if n > 0 && !c[2].starts_with('+') => n,
        _ => return err(format!("sense index must be a positive integer, found `{}`", c[2])),
    };
    let confidence = if c[3] == NONE {
        Confidence::one()
    } else {
        c[3].parse::<Confidence>().map_err(|e| LineError(e.to_string()))?
    };
    Ok(Variant { lemma: lemma.to_string(), synset, sense_index, confidence, source: c[4].to_string() })
}

/// `code TAB source_synset TAB target_synset`
pub fn parse_relation_line(line: &str) -> Result<Relation, LineError> {
    let c = columns(line, 3, 3)?;
    Ok(Relation::new(RelCode::new(nonempty(c[0], "relation code")?), synset_id(c[1])?, synset_id(c[2])?))
}

/// `synset_id TAB text`
pub fn parse_example_line(line: &str) -> Result<(SynsetId, String), LineError> {
    let c = columns(line, 2, 2)?;
    Ok((synset_id(c[0])?, nonempty(c[1], "example text")?.to_string()))
}

/// `synset_id TAB ili_id`
pub fn parse_to_ili_line(line: &str) -> Result<(SynsetId, IliId), LineError> {
    let c = columns(line, 2, 2)?;
    Ok((synset_id(c[0])?, ili_id(c[1])?))
}

/// `ili_id TAB sumo_term TAB =|+|@`
pub fn parse_sumo_line(line: &str) -> Result<(IliId, SumoMapping), LineError> {
    let c = columns(line, 3, 3)?;
    let rel = c[2].parse().map_err(LineError)?;
    Ok((ili_id(c[0])?, SumoMapping { term: nonempty(c[1], "SUMO term")?.to_string(), rel }))
}

/// `ili_id TAB label`
pub fn parse_domain_line(line: &str) -> Result<(IliId, String), LineError> {
    let c = columns(line, 2, 2)?;
    Ok((ili_id(c[0])?, nonempty(c[1], "domain label")?.to_string()))
}

/// `label TAB parent|-`
pub fn parse_domain_hierarchy_line(line: &str) -> Result<(String, Option<String>), LineError> {
    let c = columns(line, 2, 2)?;
    Ok((nonempty(c[0], "domain label")?.to_string(), optional(c[1]).map(str::to_string)))
}

fn feature_id(field: &str) -> Result<FeatureId, LineError> {
    match field.parse() {
        Ok(n) if !field.starts_with('+') => Ok(n),
        _ => err(format!("bad feature id `{field}`")),
    }
}

/// `feature_id TAB name TAB parent_ids|-` where parents are comma separated.
pub fn parse_feature_line(line: &str) -> Result<Feature, LineError> {
    let c = columns(line, 3, 3)?;
    let parents = match optional(c[2]) {
        None => Vec::new(),
        Some(list) => list.split(',').map(feature_id).collect::<Result<_, _>>()?,
    };
    Ok(Feature { id: feature_id(c[0])?, name: nonempty(c[1], "feature name")?.to_string(), parents })
}

/// `ili_id TAB feature_id`
pub fn parse_ili_to_to_line(line: &str) -> Result<(IliId, FeatureId), LineError> {
    let c = columns(line, 2, 2)?;
    Ok((ili_id(c[0])?, feature_id(c[1])?))
}

/// `ili_id TAB ili_id` (BLC links and version maps)
pub fn parse_ili_pair_line(line: &str) -> Result<(IliId, IliId), LineError> {
    let c = columns(line, 2, 2)?;
    Ok((ili_id(c[0])?, ili_id(c[1])?))
}

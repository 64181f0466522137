//! Structured identifiers for synsets, interlingual-index records and lexicons.
//!
//! Canonical string forms:
//!
//! * synset: `{lang}-{version}-{offset}-{pos}`, e.g. `spa-30-02958343-n`
//! * ILI record: `ili-{version}-{offset}-{pos}`, e.g. `ili-30-02958343-n`
//! * lexicon key: `{lang}-{version}`, e.g. `spa-30`
//!
//! Offsets are exactly eight decimal digits. Parsing followed by rendering is
//! the identity on every accepted string.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("bad part of speech `{0}` (expected n, v, a or r)")]
    Pos(String),
    #[error("bad language code `{0}` (expected three lowercase ASCII letters)")]
    Lang(String),
    #[error("bad version tag `{0}` (expected ASCII letters, digits or '.')")]
    Version(String),
    #[error("bad offset `{0}` (expected exactly 8 decimal digits)")]
    Offset(String),
    #[error("malformed identifier `{0}`")]
    Shape(String),
}

/// Part of speech. Satellite adjectives are folded into `Adjective`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb];

    pub fn as_char(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adjective => 'a',
            Pos::Adverb => 'r',
        }
    }

    pub fn from_char(c: char) -> Result<Pos, IdError> {
        match c {
            'n' => Ok(Pos::Noun),
            'v' => Ok(Pos::Verb),
            'a' => Ok(Pos::Adjective),
            'r' => Ok(Pos::Adverb),
            other => Err(IdError::Pos(other.to_string())),
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            Pos::Noun => "Noun",
            Pos::Verb => "Verb",
            Pos::Adjective => "Adjective",
            Pos::Adverb => "Adverb",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Pos {
    type Err = IdError;
    fn from_str(s: &str) -> Result<Pos, IdError> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Pos::from_char(c),
            _ => Err(IdError::Pos(s.to_string())),
        }
    }
}

/// Three-letter language code (`eng`, `spa`, `cat`, `eus`, `gal`, `por`, ...).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lang(String);

impl Lang {
    pub fn new(code: &str) -> Result<Lang, IdError> {
        if code.len() == 3 && code.bytes().all(|b| b.is_ascii_lowercase()) {
            Ok(Lang(code.to_string()))
        } else {
            Err(IdError::Lang(code.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// BCP 47 tag used for RDF language-tagged literals.
    pub fn bcp47(&self) -> &str {
        match self.0.as_str() {
            "eng" => "en",
            "spa" => "es",
            "cat" => "ca",
            "eus" => "eu",
            "gal" | "glg" => "gl",
            "por" => "pt",
            other => other,
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Lang {
    type Err = IdError;
    fn from_str(s: &str) -> Result<Lang, IdError> {
        Lang::new(s)
    }
}

/// Wordnet version tag such as `30` or `31`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Version(String);

impl Version {
    pub fn new(tag: &str) -> Result<Version, IdError> {
        if !tag.is_empty() && tag.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'.') {
            Ok(Version(tag.to_string()))
        } else {
            Err(IdError::Version(tag.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Version {
    type Err = IdError;
    fn from_str(s: &str) -> Result<Version, IdError> {
        Version::new(s)
    }
}

fn parse_offset(s: &str) -> Result<u32, IdError> {
    if s.len() == 8 && s.bytes().all(|b| b.is_ascii_digit()) {
        Ok(s.parse().expect("eight ASCII digits fit in u32"))
    } else {
        Err(IdError::Offset(s.to_string()))
    }
}

/// Splits `a-b-c-d` into exactly four dash-separated parts.
fn four_parts(s: &str) -> Result<[&str; 4], IdError> {
    let mut it = s.split('-');
    let parts = [it.next(), it.next(), it.next(), it.next()];
    match (parts, it.next()) {
        ([Some(a), Some(b), Some(c), Some(d)], None) => Ok([a, b, c, d]),
        _ => Err(IdError::Shape(s.to_string())),
    }
}

/// Identifier of an interlingual-index record.
///
/// Field order gives the same ordering as the canonical string form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IliId {
    version: Version,
    offset: u32,
    pos: Pos,
}

impl IliId {
    pub fn new(version: Version, offset: u32, pos: Pos) -> Result<IliId, IdError> {
        if offset > 99_999_999 {
            return Err(IdError::Offset(offset.to_string()));
        }
        Ok(IliId { version, offset, pos })
    }

    pub fn version(&self) -> &Version {
        &self.version
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn pos(&self) -> Pos {
        self.pos
    }
}

impl fmt::Display for IliId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ili-{}-{:08}-{}", self.version, self.offset, self.pos)
    }
}

impl FromStr for IliId {
    type Err = IdError;
    fn from_str(s: &str) -> Result<IliId, IdError> {
        let [prefix, version, offset, pos] = four_parts(s)?;
        if prefix != "ili" {
            return Err(IdError::Shape(s.to_string()));
        }
        Ok(IliId {
            version: version.parse()?,
            offset: parse_offset(offset)?,
            pos: pos.parse()?,
        })
    }
}

/// Identifier of a language-specific synset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId {
    lang: Lang,
    version: Version,
    offset: u32,
    pos: Pos,
}

impl SynsetId {
    pub fn new(lang: Lang, version: Version, offset: u32, pos: Pos) -> Result<SynsetId, IdError> {
        if offset > 99_999_999 {
            return Err(IdError::Offset(offset.to_string()));
        }
        Ok(SynsetId { lang, version, offset, pos })
    }

    pub fn lang(&self) -> &Lang {
        &self.lang
    }

    pub fn version(&self) -> &Version {
        &self.version
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn pos(&self) -> Pos {
        self.pos
    }

    pub fn lexicon(&self) -> LexiconKey {
        LexiconKey { lang: self.lang.clone(), version: self.version.clone() }
    }

    /// Same version, offset and POS in another language. Used by the expand
    /// strategies, whose targets share the source wordnet's offsets.
    pub fn with_lang(&self, lang: &Lang) -> SynsetId {
        SynsetId { lang: lang.clone(), ..self.clone() }
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{:08}-{}", self.lang, self.version, self.offset, self.pos)
    }
}

impl FromStr for SynsetId {
    type Err = IdError;
    fn from_str(s: &str) -> Result<SynsetId, IdError> {
        let [lang, version, offset, pos] = four_parts(s)?;
        Ok(SynsetId {
            lang: lang.parse()?,
            version: version.parse()?,
            offset: parse_offset(offset)?,
            pos: pos.parse()?,
        })
    }
}

/// `(language, version)` pair naming one wordnet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexiconKey {
    pub lang: Lang,
    pub version: Version,
}

impl LexiconKey {
    pub fn new(lang: Lang, version: Version) -> LexiconKey {
        LexiconKey { lang, version }
    }
}

impl fmt::Display for LexiconKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lang, self.version)
    }
}

impl FromStr for LexiconKey {
    type Err = IdError;
    fn from_str(s: &str) -> Result<LexiconKey, IdError> {
        let (lang, version) = s.split_once('-').ok_or_else(|| IdError::Shape(s.to_string()))?;
        Ok(LexiconKey { lang: lang.parse()?, version: version.parse()? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_canonical_synset_id() {
        let id: SynsetId = "eng-30-00001740-n".parse().unwrap();
        assert_eq!(id.lang().as_str(), "eng");
        assert_eq!(id.version().as_str(), "30");
        assert_eq!(id.offset(), 1740);
        assert_eq!(id.pos(), Pos::Noun);
        assert_eq!(id.to_string(), "eng-30-00001740-n");
    }

    #[test]
    fn rejects_short_offset() {
        assert_eq!(
            "spa-30-123-n".parse::<SynsetId>(),
            Err(IdError::Offset("123".into()))
        );
        assert!("spa-30-0000000012-n".parse::<SynsetId>().is_err());
    }

    #[test]
    fn rejects_bad_pos_and_lang() {
        assert!("spa-30-00000001-x".parse::<SynsetId>().is_err());
        assert!("es-30-00000001-n".parse::<SynsetId>().is_err());
        assert!("SPA-30-00000001-n".parse::<SynsetId>().is_err());
        assert!("spa-30-00000001-n-extra".parse::<SynsetId>().is_err());
    }

    #[test]
    fn ili_form() {
        let ili: IliId = "ili-30-02958343-n".parse().unwrap();
        assert_eq!(ili.to_string(), "ili-30-02958343-n");
        assert!("eng-30-02958343-n".parse::<IliId>().is_err());
    }

    #[test]
    fn lexicon_key_round_trip() {
        let key: LexiconKey = "gal-30".parse().unwrap();
        assert_eq!(key.to_string(), "gal-30");
        let id: SynsetId = "gal-30-00000001-v".parse().unwrap();
        assert_eq!(id.lexicon(), key);
    }

    fn synset_string() -> impl Strategy<Value = String> {
        ("[a-z]{3}", "[A-Za-z0-9.]{1,4}", "[0-9]{8}", "[nvar]")
            .prop_map(|(l, v, o, p)| format!("{l}-{v}-{o}-{p}"))
    }

    proptest! {
        #[test]
        fn synset_id_render_parse_identity(s in synset_string()) {
            let id: SynsetId = s.parse().unwrap();
            prop_assert_eq!(id.to_string(), s);
        }

        #[test]
        fn ordering_agrees_with_canonical_strings(a in synset_string(), b in synset_string()) {
            let ia: SynsetId = a.parse().unwrap();
            let ib: SynsetId = b.parse().unwrap();
            prop_assert_eq!(ia.cmp(&ib), a.cmp(&b));
        }
    }
}

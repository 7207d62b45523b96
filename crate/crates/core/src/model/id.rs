use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::kind::NodeKind;

/// Globally unique symbol identifier built from the owner chain.
///
/// ```text
/// p/            package
/// p/A#          class, interface, enum, trait, type member
/// p/B.          object
/// p/A#m().      method (p/A#m(+1). for the second overload)
/// p/A#m().(a)   parameter
/// p/A#m().[T]   type parameter
/// p/B.b.        value
/// p/B.c().      variable
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StableSymbolId(String);

/// Name reserved for constructors; rendered back-quoted inside ids.
pub const CONSTRUCTOR_NAME: &str = "<init>";

/// Package segment used for declarations without a package statement.
pub const EMPTY_PACKAGE: &str = "_empty_";

impl StableSymbolId {
    pub fn root() -> Self {
        StableSymbolId(String::new())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Id of a (possibly dotted) package, e.g. `a.b` becomes `a/b/`.
    pub fn package(dotted: &str) -> Result<Self, IdError> {
        let mut id = StableSymbolId::root();
        if dotted.is_empty() {
            return make_stable_id(&id, EMPTY_PACKAGE, SymbolKind::Package, None);
        }
        for segment in dotted.split('.') {
            id = make_stable_id(&id, segment, SymbolKind::Package, None)?;
        }
        Ok(id)
    }
}

impl fmt::Display for StableSymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for StableSymbolId {
    fn from(s: String) -> Self {
        StableSymbolId(s)
    }
}

impl From<&str> for StableSymbolId {
    fn from(s: &str) -> Self {
        StableSymbolId(s.to_string())
    }
}

impl Borrow<str> for StableSymbolId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for StableSymbolId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// What kind of symbol an id is built for. Packages are not graph nodes,
/// so they get their own variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolKind {
    Package,
    Node(NodeKind),
}

impl From<NodeKind> for SymbolKind {
    fn from(k: NodeKind) -> Self {
        SymbolKind::Node(k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("symbol name is empty")]
    EmptyName,
    #[error("invalid character {ch:?} at offset {offset} in symbol name {name:?}")]
    InvalidCharacter {
        name: String,
        ch: char,
        offset: usize,
    },
    #[error("overload index is not allowed for {0}")]
    UnexpectedOverload(String),
    #[error("no identifier rule for kind {0}")]
    UnsupportedKind(String),
    #[error("constructor name must be {CONSTRUCTOR_NAME:?}, got {0:?}")]
    ConstructorName(String),
}

const DELIMITERS: &[char] = &[
    '/', '#', '.', '(', ')', '[', ']', '`', '+', ';', ',', ':', '<', '>', '{', '}', '"', '\'',
];

fn check_name(name: &str) -> Result<(), IdError> {
    if name.is_empty() {
        return Err(IdError::EmptyName);
    }
    if let Some((offset, ch)) = name
        .char_indices()
        .find(|(_, c)| c.is_whitespace() || c.is_control() || DELIMITERS.contains(c))
    {
        return Err(IdError::InvalidCharacter {
            name: name.to_string(),
            ch,
            offset,
        });
    }
    Ok(())
}

fn term_suffix(overload: Option<u32>) -> String {
    match overload {
        None | Some(0) => "().".to_string(),
        Some(n) => format!("(+{n})."),
    }
}

/// Builds the id of `name` declared inside `owner`.
///
/// `overload` numbers same-named terms in one owner in declaration order;
/// index 0 renders like no index. It is accepted for methods, constructors,
/// and for values/variables (locals can repeat a name in sibling blocks, and
/// a Java field may share its name with a method).
pub fn make_stable_id(
    owner: &StableSymbolId,
    name: &str,
    kind: SymbolKind,
    overload: Option<u32>,
) -> Result<StableSymbolId, IdError> {
    let owner = owner.as_str();
    let kind = match kind {
        SymbolKind::Package => {
            if overload.is_some() {
                return Err(IdError::UnexpectedOverload("PACKAGE".into()));
            }
            check_name(name)?;
            return Ok(StableSymbolId(format!("{owner}{name}/")));
        }
        SymbolKind::Node(k) => k,
    };

    let allows_overload = matches!(
        kind,
        NodeKind::Method | NodeKind::Constructor | NodeKind::Value | NodeKind::Variable
    );
    if overload.is_some() && !allows_overload {
        return Err(IdError::UnexpectedOverload(kind.to_string()));
    }

    if kind == NodeKind::Constructor {
        if name != CONSTRUCTOR_NAME {
            return Err(IdError::ConstructorName(name.to_string()));
        }
        return Ok(StableSymbolId(format!(
            "{owner}`{CONSTRUCTOR_NAME}`{}",
            term_suffix(overload)
        )));
    }

    check_name(name)?;
    let id = match kind {
        NodeKind::Class
        | NodeKind::Interface
        | NodeKind::Enum
        | NodeKind::Trait
        | NodeKind::Type => {
            format!("{owner}{name}#")
        }
        NodeKind::Object => format!("{owner}{name}."),
        NodeKind::Method | NodeKind::Variable => format!("{owner}{name}{}", term_suffix(overload)),
        NodeKind::Value => match overload {
            None | Some(0) => format!("{owner}{name}."),
            Some(n) => format!("{owner}{name}(+{n})."),
        },
        NodeKind::Param => format!("{owner}({name})"),
        NodeKind::TypeParam => format!("{owner}[{name}]"),
        NodeKind::Constructor => unreachable!(),
        NodeKind::Other(k) => return Err(IdError::UnsupportedKind(k)),
    };
    Ok(StableSymbolId(id))
}

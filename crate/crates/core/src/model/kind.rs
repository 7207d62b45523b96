use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Kind of a declaration node.
///
/// `Other` keeps kinds this build does not know about, so graphs produced by
/// other extractors survive a load/store cycle untouched.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Class,
    Interface,
    Enum,
    Method,
    Constructor,
    Param,
    TypeParam,
    Value,
    Variable,
    Object,
    Trait,
    Type,
    Other(String),
}

impl NodeKind {
    pub const KNOWN: [NodeKind; 12] = [
        NodeKind::Class,
        NodeKind::Interface,
        NodeKind::Enum,
        NodeKind::Method,
        NodeKind::Constructor,
        NodeKind::Param,
        NodeKind::TypeParam,
        NodeKind::Value,
        NodeKind::Variable,
        NodeKind::Object,
        NodeKind::Trait,
        NodeKind::Type,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            NodeKind::Class => "CLASS",
            NodeKind::Interface => "INTERFACE",
            NodeKind::Enum => "ENUM",
            NodeKind::Method => "METHOD",
            NodeKind::Constructor => "CONSTRUCTOR",
            NodeKind::Param => "PARAM",
            NodeKind::TypeParam => "TYPE_PARAM",
            NodeKind::Value => "VALUE",
            NodeKind::Variable => "VARIABLE",
            NodeKind::Object => "OBJECT",
            NodeKind::Trait => "TRAIT",
            NodeKind::Type => "TYPE",
            NodeKind::Other(s) => s,
        }
    }

    /// Class-level units: the vertex set of a class collaboration network.
    pub fn is_class_level(&self) -> bool {
        matches!(
            self,
            NodeKind::Class
                | NodeKind::Interface
                | NodeKind::Enum
                | NodeKind::Object
                | NodeKind::Trait
        )
    }

    /// Vertex kinds of a call graph.
    pub fn is_callable_or_value(&self) -> bool {
        matches!(
            self,
            NodeKind::Method | NodeKind::Constructor | NodeKind::Value | NodeKind::Variable
        )
    }
}

impl From<&str> for NodeKind {
    fn from(s: &str) -> Self {
        NodeKind::KNOWN
            .iter()
            .find(|k| k.as_str() == s)
            .cloned()
            .unwrap_or_else(|| NodeKind::Other(s.to_string()))
    }
}

impl FromStr for NodeKind {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(NodeKind::from(s))
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Coupling type of an edge in a class collaboration network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CcnEdgeType {
    Inheritance,
    Aggregation,
    Reference,
}

impl CcnEdgeType {
    pub fn as_str(self) -> &'static str {
        match self {
            CcnEdgeType::Inheritance => "INHERITANCE",
            CcnEdgeType::Aggregation => "AGGREGATION",
            CcnEdgeType::Reference => "REFERENCE",
        }
    }
}

impl fmt::Display for CcnEdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Edge label. Class collaboration edges share the same field on the wire.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeType {
    Call,
    Declaration,
    Extend,
    Override,
    Parameter,
    ReturnType,
    Type,
    TypeParameter,
    Ccn(CcnEdgeType),
    Other(String),
}

impl EdgeType {
    pub const KNOWN: [EdgeType; 8] = [
        EdgeType::Call,
        EdgeType::Declaration,
        EdgeType::Extend,
        EdgeType::Override,
        EdgeType::Parameter,
        EdgeType::ReturnType,
        EdgeType::Type,
        EdgeType::TypeParameter,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            EdgeType::Call => "CALL",
            EdgeType::Declaration => "DECLARATION",
            EdgeType::Extend => "EXTEND",
            EdgeType::Override => "OVERRIDE",
            EdgeType::Parameter => "PARAMETER",
            EdgeType::ReturnType => "RETURN_TYPE",
            EdgeType::Type => "TYPE",
            EdgeType::TypeParameter => "TYPE_PARAMETER",
            EdgeType::Ccn(c) => c.as_str(),
            EdgeType::Other(s) => s,
        }
    }
}

impl From<&str> for EdgeType {
    fn from(s: &str) -> Self {
        if let Some(k) = EdgeType::KNOWN.iter().find(|k| k.as_str() == s) {
            return k.clone();
        }
        match s {
            "INHERITANCE" => EdgeType::Ccn(CcnEdgeType::Inheritance),
            "AGGREGATION" => EdgeType::Ccn(CcnEdgeType::Aggregation),
            "REFERENCE" => EdgeType::Ccn(CcnEdgeType::Reference),
            _ => EdgeType::Other(s.to_string()),
        }
    }
}

impl FromStr for EdgeType {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(EdgeType::from(s))
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                Ok(<$ty>::from(s.as_str()))
            }
        }
    };
}

string_serde!(NodeKind);
string_serde!(EdgeType);

impl Serialize for CcnEdgeType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

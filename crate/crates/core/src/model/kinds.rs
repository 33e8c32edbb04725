use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// The five architectural representations, from business down to data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Business = 1,
    OperationalService = 2,
    Functional = 3,
    Component = 4,
    Data = 5,
}

impl Layer {
    pub const ALL: [Layer; 5] = [
        Layer::Business,
        Layer::OperationalService,
        Layer::Functional,
        Layer::Component,
        Layer::Data,
    ];

    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn from_ordinal(ordinal: u8) -> Option<Layer> {
        Layer::ALL.get(usize::from(ordinal).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::Business => "Business",
            Layer::OperationalService => "OperationalService",
            Layer::Functional => "Functional",
            Layer::Component => "Component",
            Layer::Data => "Data",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Layer {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    BusinessProcess,
    BusinessFunction,
    BusinessOperation,
    OperationalService,
    AutomatedFunction,
    Dialog,
    ViewFunction,
    Component,
    Module,
    Class,
    Method,
}

impl ElementKind {
    pub const ALL: [ElementKind; 11] = [
        ElementKind::BusinessProcess,
        ElementKind::BusinessFunction,
        ElementKind::BusinessOperation,
        ElementKind::OperationalService,
        ElementKind::AutomatedFunction,
        ElementKind::Dialog,
        ElementKind::ViewFunction,
        ElementKind::Component,
        ElementKind::Module,
        ElementKind::Class,
        ElementKind::Method,
    ];

    pub fn layer(self) -> Layer {
        use ElementKind::*;
        match self {
            BusinessProcess | BusinessFunction | BusinessOperation => Layer::Business,
            OperationalService | AutomatedFunction => Layer::OperationalService,
            Dialog | ViewFunction => Layer::Functional,
            Component | Module => Layer::Component,
            Class | Method => Layer::Data,
        }
    }

    pub fn name(self) -> &'static str {
        use ElementKind::*;
        match self {
            BusinessProcess => "BusinessProcess",
            BusinessFunction => "BusinessFunction",
            BusinessOperation => "BusinessOperation",
            OperationalService => "OperationalService",
            AutomatedFunction => "AutomatedFunction",
            Dialog => "Dialog",
            ViewFunction => "ViewFunction",
            Component => "Component",
            Module => "Module",
            Class => "Class",
            Method => "Method",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        ElementKind::ALL.into_iter().find(|k| k.name() == s).ok_or(())
    }
}

impl Serialize for ElementKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Edge types between elements.
///
/// `Contains` and `FlowsTo` point in the refinement direction (parent to
/// child, view function to the dialog it hands control to). `Implements`,
/// `Covers` and `Realizes` point from the more detailed element to the one it
/// is derived from. `BelongsTo` is only ever a derived view of `Contains` and
/// is rejected when supplied as a stored link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkKind {
    Contains,
    Implements,
    Covers,
    Realizes,
    FlowsTo,
    BelongsTo,
}

impl LinkKind {
    pub const ALL: [LinkKind; 6] = [
        LinkKind::Contains,
        LinkKind::Implements,
        LinkKind::Covers,
        LinkKind::Realizes,
        LinkKind::FlowsTo,
        LinkKind::BelongsTo,
    ];

    /// The kinds that may be stored in a model.
    pub const STORED: [LinkKind; 5] = [
        LinkKind::Contains,
        LinkKind::Implements,
        LinkKind::Covers,
        LinkKind::Realizes,
        LinkKind::FlowsTo,
    ];

    /// Derivation kinds followed by traces and impact analysis.
    pub const DERIVATION: [LinkKind; 4] = [
        LinkKind::Contains,
        LinkKind::Implements,
        LinkKind::Covers,
        LinkKind::Realizes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinkKind::Contains => "Contains",
            LinkKind::Implements => "Implements",
            LinkKind::Covers => "Covers",
            LinkKind::Realizes => "Realizes",
            LinkKind::FlowsTo => "FlowsTo",
            LinkKind::BelongsTo => "BelongsTo",
        }
    }

    /// True when the stored `from -> to` orientation already runs toward
    /// detail.
    pub fn points_down(self) -> bool {
        matches!(self, LinkKind::Contains | LinkKind::FlowsTo | LinkKind::BelongsTo)
    }

    /// Whether a stored link of this kind may connect the two element kinds.
    pub fn allows(self, from: ElementKind, to: ElementKind) -> bool {
        use ElementKind::*;
        match self {
            LinkKind::Contains => matches!(
                (from, to),
                (BusinessProcess, BusinessFunction)
                    | (BusinessFunction, BusinessFunction)
                    | (BusinessFunction, BusinessOperation)
                    | (OperationalService, AutomatedFunction)
                    | (OperationalService, Dialog)
                    | (Dialog, ViewFunction)
                    | (Component, Module)
                    | (Component, Class)
                    | (Class, Method)
            ),
            LinkKind::Implements => (from, to) == (OperationalService, BusinessOperation),
            LinkKind::Covers => (from, to) == (ViewFunction, AutomatedFunction),
            LinkKind::Realizes => matches!((from, to), (Module, ViewFunction) | (Method, Module)),
            LinkKind::FlowsTo => (from, to) == (ViewFunction, Dialog),
            LinkKind::BelongsTo => false,
        }
    }
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinkKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        LinkKind::ALL.into_iter().find(|k| k.name() == s).ok_or(())
    }
}

impl Serialize for LinkKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Traversal direction: `Down` toward detail, `Up` toward abstraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

use crate::mask::SubsetMask;
use crate::model::{Money, NodeId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("node {0} is not a live node")]
    UnknownNode(NodeId),
    #[error("node {0} cannot owe money to itself")]
    Loop(NodeId),
    #[error("amount must be positive, got {0}")]
    NonPositiveAmount(Money),
    #[error("arithmetic overflow in debt amounts")]
    Overflow,
    #[error("active node set would exceed the capacity of {capacity} slots")]
    Capacity { capacity: usize },
    #[error("slot capacity must be between 1 and {max}, got {requested}")]
    InvalidCapacity { requested: usize, max: usize },
    #[error("subset {0} is not contained in the live mask")]
    StaleRead(SubsetMask),
    #[error("slot {0} holds no active node")]
    InactiveSlot(usize),
    #[error("oracle refuses {size} active nodes (limit {limit})")]
    OracleTooLarge { size: usize, limit: usize },
    #[error("contract violation: {0}")]
    Contract(&'static str),
}

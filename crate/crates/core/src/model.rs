//! Borrowings, net debts and transaction plans.
//!
//! A borrowing `u -> v : x` means `u` must pay `x` to `v`. The net debt of a
//! node is everything it owes minus everything owed to it; two arc lists
//! settle the same obligations exactly when they induce the same net debts.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Abstract currency units.
pub type Money = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_arc(from: NodeId, to: NodeId, amount: Money) -> Result<()> {
    if from == to {
        return Err(Error::Loop(from));
    }
    if amount <= 0 {
        return Err(Error::NonPositiveAmount(amount));
    }
    Ok(())
}

/// `borrower` must pay `amount` to `lender`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Borrowing {
    pub borrower: NodeId,
    pub lender: NodeId,
    pub amount: Money,
}

impl Borrowing {
    pub fn new(borrower: NodeId, lender: NodeId, amount: Money) -> Result<Self> {
        check_arc(borrower, lender, amount)?;
        Ok(Self { borrower, lender, amount })
    }
}

/// A payment of `amount` from `sender` to `receiver`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transaction {
    pub sender: NodeId,
    pub receiver: NodeId,
    pub amount: Money,
}

impl Transaction {
    pub fn new(sender: NodeId, receiver: NodeId, amount: Money) -> Result<Self> {
        check_arc(sender, receiver, amount)?;
        Ok(Self { sender, receiver, amount })
    }
}

impl fmt::Display for Transaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {}", self.sender, self.receiver, self.amount)
    }
}

/// Net debt per node. Only nonzero balances are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DebtState {
    debts: BTreeMap<NodeId, Money>,
}

impl DebtState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_borrowings<'a, I>(borrowings: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Borrowing>,
    {
        let mut state = Self::new();
        for b in borrowings {
            state.add(b.borrower, b.amount)?;
            state.add(b.lender, b.amount.checked_neg().ok_or(Error::Overflow)?)?;
        }
        Ok(state)
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, Money)>,
    {
        let mut state = Self::new();
        for (node, amount) in pairs {
            state.add(node, amount)?;
        }
        Ok(state)
    }

    pub fn get(&self, node: NodeId) -> Money {
        self.debts.get(&node).copied().unwrap_or(0)
    }

    pub fn add(&mut self, node: NodeId, delta: Money) -> Result<()> {
        let updated = self.get(node).checked_add(delta).ok_or(Error::Overflow)?;
        if updated == 0 {
            self.debts.remove(&node);
        } else {
            self.debts.insert(node, updated);
        }
        Ok(())
    }

    /// Nodes with nonzero balance, ascending by id.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Money)> + '_ {
        self.debts.iter().map(|(&n, &d)| (n, d))
    }

    pub fn active_count(&self) -> usize {
        self.debts.len()
    }

    pub fn is_settled(&self) -> bool {
        self.debts.is_empty()
    }

    /// Sum of all balances; zero for any state built from borrowings.
    pub fn total(&self) -> i128 {
        self.debts.values().map(|&d| d as i128).sum()
    }
}

/// A transaction graph. Payments between the same ordered pair are merged,
/// and the list is kept sorted by `(sender, receiver)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TransactionPlan {
    transactions: Vec<Transaction>,
}

impl TransactionPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_transactions<I>(transactions: I) -> Result<Self>
    where
        I: IntoIterator<Item = Transaction>,
    {
        let mut merged: BTreeMap<(NodeId, NodeId), Money> = BTreeMap::new();
        for t in transactions {
            let slot = merged.entry((t.sender, t.receiver)).or_insert(0);
            *slot = slot.checked_add(t.amount).ok_or(Error::Overflow)?;
        }
        Ok(Self {
            transactions: merged
                .into_iter()
                .map(|((sender, receiver), amount)| Transaction { sender, receiver, amount })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Transaction> {
        self.transactions.iter()
    }

    pub fn as_slice(&self) -> &[Transaction] {
        &self.transactions
    }

    /// Net debts the plan clears: a payment `s -> r : x` discharges `x` of
    /// debt at `s` and `x` of credit at `r`.
    pub fn debts(&self) -> Result<DebtState> {
        let mut state = DebtState::new();
        for t in &self.transactions {
            state.add(t.sender, t.amount)?;
            state.add(t.receiver, -t.amount)?;
        }
        Ok(state)
    }
}

impl<'a> IntoIterator for &'a TransactionPlan {
    type Item = &'a Transaction;
    type IntoIter = std::slice::Iter<'a, Transaction>;

    fn into_iter(self) -> Self::IntoIter {
        self.transactions.iter()
    }
}

/// Out-weight minus in-weight of `v` over the borrowing multigraph on nodes
/// `0..node_count`.
pub fn absolute_debt(borrowings: &[Borrowing], node_count: usize, v: NodeId) -> Result<Money> {
    if v.index() >= node_count {
        return Err(Error::UnknownNode(v));
    }
    let mut debt: Money = 0;
    for b in borrowings {
        if b.borrower == v {
            debt = debt.checked_add(b.amount).ok_or(Error::Overflow)?;
        }
        if b.lender == v {
            debt = debt.checked_sub(b.amount).ok_or(Error::Overflow)?;
        }
    }
    Ok(debt)
}

fn wide_balances<I>(arcs: I) -> BTreeMap<NodeId, i128>
where
    I: IntoIterator<Item = (NodeId, NodeId, Money)>,
{
    let mut out = BTreeMap::new();
    for (from, to, amount) in arcs {
        *out.entry(from).or_insert(0) += amount as i128;
        *out.entry(to).or_insert(0) -= amount as i128;
    }
    out.retain(|_, d| *d != 0);
    out
}

/// True iff `plan` induces exactly the net debts of `borrowings`.
pub fn is_equivalent(borrowings: &[Borrowing], plan: &TransactionPlan) -> bool {
    let owed = wide_balances(borrowings.iter().map(|b| (b.borrower, b.lender, b.amount)));
    let paid = wide_balances(plan.iter().map(|t| (t.sender, t.receiver, t.amount)));
    owed == paid
}

/// True iff `plan` clears exactly the balances in `debts`.
pub fn settles(debts: &DebtState, plan: &TransactionPlan) -> bool {
    let paid = wide_balances(plan.iter().map(|t| (t.sender, t.receiver, t.amount)));
    let owed: BTreeMap<NodeId, i128> = debts.iter().map(|(n, d)| (n, d as i128)).collect();
    owed == paid
}

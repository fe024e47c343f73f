use std::time::{Duration, Instant};

use crate::{Error, Result};

/// Node counter with optional node and wall-clock limits.
///
/// Every recursive solver calls [`Budget::tick`] once per search node, so a
/// runaway search surfaces as [`Error::Resource`] instead of hanging.
#[derive(Debug, Clone)]
pub struct Budget {
    nodes: u64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Self::unlimited()
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            nodes: 0,
            max_nodes: None,
            deadline: None,
        }
    }

    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = Some(max_nodes);
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }

    /// Nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if let Some(max) = self.max_nodes {
            if self.nodes > max {
                return Err(Error::resource(format!("node limit {max} reached")));
            }
        }
        if let Some(deadline) = self.deadline {
            if self.nodes.is_multiple_of(64) && Instant::now() > deadline {
                return Err(Error::resource("timeout reached"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_limit_trips() {
        let mut b = Budget::unlimited().with_max_nodes(2);
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert!(matches!(b.tick(), Err(Error::Resource(_))));
        assert_eq!(b.nodes(), 3);
    }

    #[test]
    fn unlimited_never_trips() {
        let mut b = Budget::unlimited();
        for _ in 0..10_000 {
            b.tick().unwrap();
        }
    }
}

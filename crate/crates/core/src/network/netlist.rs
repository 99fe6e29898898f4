//! Netlist container, validation, and JSON schema.

use super::{Element, NetworkError};
use serde::{Deserialize, Serialize};

/// An external port: a designated node and its real reference impedance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Port {
    pub node: usize,
    pub z_ref_ohms: f64,
}

/// A circuit as a list of elements over `node_count` nodes (0 = ground) with
/// an ordered list of external ports.
///
/// Serialized form (the on-disk netlist schema):
///
/// ```json
/// {
///   "node_count": 3,
///   "elements": [
///     { "kind": "capacitor", "farads": 1e-13, "nodes": [1, 2] },
///     { "kind": "tline", "z0_ohms": 188.4, "electrical_length_rad": 1.13,
///       "reference_hz": 9.8e9, "nodes": [2, 0] }
///   ],
///   "ports": [ { "node": 1, "z_ref_ohms": 50.0 } ]
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Netlist {
    pub node_count: usize,
    pub elements: Vec<Element>,
    pub ports: Vec<Port>,
}

impl Netlist {
    pub fn validate(&self) -> Result<(), NetworkError> {
        if self.node_count < 2 {
            return Err(NetworkError::InvalidNetlist(
                "need at least ground and one node".into(),
            ));
        }
        for el in &self.elements {
            el.validate()?;
            let (a, b) = el.nodes();
            if a >= self.node_count || b >= self.node_count {
                return Err(NetworkError::InvalidNetlist(format!(
                    "element references node ({a}, {b}) outside 0..{}",
                    self.node_count
                )));
            }
            if a == b {
                return Err(NetworkError::InvalidNetlist(format!(
                    "element shorts node {a} to itself"
                )));
            }
        }
        for port in &self.ports {
            if port.node == 0 || port.node >= self.node_count {
                return Err(NetworkError::InvalidNetlist(format!(
                    "port node {} is ground or outside the graph",
                    port.node
                )));
            }
            if port.z_ref_ohms <= 0.0 {
                return Err(NetworkError::InvalidNetlist(format!(
                    "port reference impedance must be positive, got {}",
                    port.z_ref_ohms
                )));
            }
        }
        self.check_connectivity()
    }

    /// Every non-ground node must be reachable from ground through elements.
    /// Port nodes anchor the search as well: their reference termination
    /// provides a return path, so an element-free port is a valid open.
    fn check_connectivity(&self) -> Result<(), NetworkError> {
        let mut seen = vec![false; self.node_count];
        seen[0] = true;
        let mut stack = vec![0usize];
        for port in &self.ports {
            if !seen[port.node] {
                seen[port.node] = true;
                stack.push(port.node);
            }
        }
        while let Some(n) = stack.pop() {
            for el in &self.elements {
                let (a, b) = el.nodes();
                let next = if a == n {
                    b
                } else if b == n {
                    a
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(node) => Err(NetworkError::InvalidNetlist(format!(
                "node {node} is not reachable from ground"
            ))),
            None => Ok(()),
        }
    }

    pub fn is_lossless(&self) -> bool {
        self.elements.iter().all(Element::is_lossless)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("netlist serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, NetworkError> {
        let netlist: Netlist = serde_json::from_str(s)
            .map_err(|e| NetworkError::InvalidNetlist(format!("JSON parse error: {e}")))?;
        netlist.validate()?;
        Ok(netlist)
    }
}

/// Incrementally builds a [`Netlist`], allocating node numbers on demand.
#[derive(Debug, Default, Clone)]
pub struct NetlistBuilder {
    elements: Vec<Element>,
    ports: Vec<Port>,
    next_node: usize,
}

impl NetlistBuilder {
    pub fn new() -> Self {
        Self { elements: Vec::new(), ports: Vec::new(), next_node: 1 }
    }

    /// Allocates a fresh node number.
    pub fn node(&mut self) -> usize {
        let n = self.next_node;
        self.next_node += 1;
        n
    }

    pub fn capacitor(&mut self, farads: f64, a: usize, b: usize) -> &mut Self {
        self.push(Element::Capacitor { farads, nodes: (a, b) })
    }

    pub fn inductor(&mut self, henries: f64, a: usize, b: usize) -> &mut Self {
        self.push(Element::Inductor { henries, nodes: (a, b) })
    }

    pub fn resistor(&mut self, ohms: f64, a: usize, b: usize) -> &mut Self {
        self.push(Element::Resistor { ohms, nodes: (a, b) })
    }

    pub fn tline(
        &mut self,
        z0_ohms: f64,
        electrical_length_rad: f64,
        reference_hz: f64,
        a: usize,
        b: usize,
    ) -> &mut Self {
        self.push(Element::Tline { z0_ohms, electrical_length_rad, reference_hz, nodes: (a, b) })
    }

    pub fn port(&mut self, node: usize, z_ref_ohms: f64) -> &mut Self {
        self.ports.push(Port { node, z_ref_ohms });
        self
    }

    fn push(&mut self, el: Element) -> &mut Self {
        let (a, b) = el.nodes();
        self.next_node = self.next_node.max(a + 1).max(b + 1);
        self.elements.push(el);
        self
    }

    pub fn build(&self) -> Result<Netlist, NetworkError> {
        let netlist = Netlist {
            node_count: self.next_node,
            elements: self.elements.clone(),
            ports: self.ports.clone(),
        };
        netlist.validate()?;
        Ok(netlist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floating_island_rejected() {
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        let n2 = b.node();
        let n3 = b.node();
        b.capacitor(1e-12, n1, 0).capacitor(1e-12, n2, n3).port(n1, 50.0);
        assert!(matches!(b.build(), Err(NetworkError::InvalidNetlist(_))));
    }

    #[test]
    fn port_on_ground_rejected() {
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        b.capacitor(1e-12, n1, 0).port(0, 50.0);
        assert!(b.build().is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut b = NetlistBuilder::new();
        let n1 = b.node();
        let n2 = b.node();
        b.capacitor(2.5e-15, n1, n2)
            .inductor(1.1e-9, n2, 0)
            .tline(188.4, 1.2, 9.8e9, n2, 0)
            .port(n1, 50.0);
        let netlist = b.build().unwrap();
        let parsed = Netlist::from_json(&netlist.to_json()).unwrap();
        assert_eq!(parsed, netlist);
    }
}

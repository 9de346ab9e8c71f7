//! Problem data and solution types.
//!
//! Index conventions used across the whole crate:
//!
//! * Helpers are numbered `0..K` in their fixed TDMA order (the paper's
//!   nodes `1..=K`); the local user comes last.
//! * An [`Assignment`] is an `L x (K+1)` row-stochastic matrix whose columns
//!   `0..K` are the helpers and whose column `K` is the local user.
//! * Per-node vectors (`node_energy`, `compute_time`) follow the same order:
//!   helpers first, local last.
//!
//! All quantities use SI base units internally: bits, seconds, hertz, watts,
//! joules, cycles/second. Channel gains are stored pre-normalized by the
//! receiver noise power (units 1/W), so rate and power formulas never see raw
//! gains or noise figures.

use serde::{Deserialize, Serialize};

use crate::algorithms::SchemeLabel;
use crate::Error;

/// Tolerance for assignment row sums and energy-budget audits.
pub const AUDIT_TOL: f64 = 1e-9;

/// One indivisible computation task: `input_bits` must be uploaded before
/// remote execution, `output_bits` come back afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub input_bits: f64,
    pub output_bits: f64,
}

/// A computing node (the local user or one helper).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    /// CPU frequency in cycles/second.
    pub cpu_freq: f64,
    /// Effective capacitance coefficient: dynamic energy is
    /// `kappa * cycles * cpu_freq^2`.
    pub kappa: f64,
    /// Total energy budget in joules.
    pub energy_budget: f64,
    /// Cycles needed per input bit, one entry per task.
    pub cycles_per_bit: Vec<f64>,
}

/// Normalized channel power gains between the local user and one helper,
/// in 1/W (raw gain divided by receiver noise power).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub uplink_gain: f64,
    pub downlink_gain: f64,
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub tasks: Vec<Task>,
    pub local: Node,
    /// Helpers in TDMA slot order.
    pub helpers: Vec<Node>,
    /// Channels aligned with `helpers`.
    pub channels: Vec<Channel>,
    /// Shared transmission bandwidth in Hz.
    pub bandwidth: f64,
}

impl Instance {
    /// Validating constructor; downstream code may assume instances built
    /// here are well-formed.
    pub fn new(
        tasks: Vec<Task>,
        local: Node,
        helpers: Vec<Node>,
        channels: Vec<Channel>,
        bandwidth: f64,
    ) -> Result<Self, Error> {
        let instance = Self { tasks, local, helpers, channels, bandwidth };
        let violations = validate_instance(&instance);
        if violations.is_empty() {
            Ok(instance)
        } else {
            Err(Error::InvalidInstance(
                violations.iter().map(Violation::to_string).collect::<Vec<_>>().join("; "),
            ))
        }
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn num_helpers(&self) -> usize {
        self.helpers.len()
    }

    /// Parse an instance from its JSON document form.
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let instance: Instance = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("JSON parse error: {e}")))?;
        let violations = validate_instance(&instance);
        if violations.is_empty() {
            Ok(instance)
        } else {
            Err(Error::InvalidInstance(
                violations.iter().map(Violation::to_string).collect::<Vec<_>>().join("; "),
            ))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

/// A single validation failure: which field broke which rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub reason: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

/// Check every type invariant of an instance. Returns an empty list iff the
/// instance is well-formed; violations are data, not failures.
pub fn validate_instance(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |field: &str, reason: String| {
        out.push(Violation { field: field.to_string(), reason });
    };

    let l = instance.tasks.len();
    let k = instance.helpers.len();
    if l == 0 {
        push("tasks", "at least one task required".into());
    }
    if k == 0 {
        push("helpers", "at least one helper required".into());
    }
    for (i, task) in instance.tasks.iter().enumerate() {
        if !(task.input_bits.is_finite() && task.input_bits >= 0.0) {
            push(&format!("tasks[{i}].input_bits"), "must be finite and >= 0".into());
        }
        if !(task.output_bits.is_finite() && task.output_bits >= 0.0) {
            push(&format!("tasks[{i}].output_bits"), "must be finite and >= 0".into());
        }
    }

    let mut check_node = |name: String, node: &Node, out: &mut Vec<Violation>| {
        if !(node.cpu_freq.is_finite() && node.cpu_freq > 0.0) {
            out.push(Violation {
                field: format!("{name}.cpu_freq"),
                reason: "must be finite and > 0".into(),
            });
        }
        if !(node.kappa.is_finite() && node.kappa >= 0.0) {
            out.push(Violation {
                field: format!("{name}.kappa"),
                reason: "must be finite and >= 0".into(),
            });
        }
        if !(node.energy_budget.is_finite() && node.energy_budget > 0.0) {
            out.push(Violation {
                field: format!("{name}.energy_budget"),
                reason: "must be finite and > 0".into(),
            });
        }
        if node.cycles_per_bit.len() != l {
            out.push(Violation {
                field: format!("{name}.cycles_per_bit"),
                reason: format!("length {} does not match task count {l}", node.cycles_per_bit.len()),
            });
        }
        for (i, c) in node.cycles_per_bit.iter().enumerate() {
            if !(c.is_finite() && *c >= 0.0) {
                out.push(Violation {
                    field: format!("{name}.cycles_per_bit[{i}]"),
                    reason: "must be finite and >= 0".into(),
                });
            }
        }
    };
    check_node("local".into(), &instance.local, &mut out);
    for (i, helper) in instance.helpers.iter().enumerate() {
        check_node(format!("helpers[{i}]"), helper, &mut out);
    }

    if instance.channels.len() != k {
        out.push(Violation {
            field: "channels".into(),
            reason: format!("length {} does not match helper count {k}", instance.channels.len()),
        });
    }
    for (i, ch) in instance.channels.iter().enumerate() {
        if !(ch.uplink_gain.is_finite() && ch.uplink_gain > 0.0) {
            out.push(Violation {
                field: format!("channels[{i}].uplink_gain"),
                reason: "must be finite and > 0".into(),
            });
        }
        if !(ch.downlink_gain.is_finite() && ch.downlink_gain > 0.0) {
            out.push(Violation {
                field: format!("channels[{i}].downlink_gain"),
                reason: "must be finite and > 0".into(),
            });
        }
    }
    if !(instance.bandwidth.is_finite() && instance.bandwidth > 0.0) {
        out.push(Violation { field: "bandwidth".into(), reason: "must be finite and > 0".into() });
    }
    out
}

/// Whether an assignment is a relaxed (fractional) or an integral one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentKind {
    Fractional,
    Binary,
}

/// An `L x (K+1)` task-assignment matrix. Row `l` gives task `l`'s share on
/// each node; columns `0..K` are helpers in TDMA order, column `K` is the
/// local user. Every row sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    matrix: Vec<Vec<f64>>,
    kind: AssignmentKind,
}

impl Assignment {
    /// Build a fractional assignment, checking shape, entry bounds, and row
    /// sums.
    pub fn fractional(matrix: Vec<Vec<f64>>, num_helpers: usize) -> Result<Self, Error> {
        Self::build(matrix, num_helpers, AssignmentKind::Fractional)
    }

    /// Build a binary assignment; additionally requires every entry to be
    /// exactly 0 or 1.
    pub fn binary(matrix: Vec<Vec<f64>>, num_helpers: usize) -> Result<Self, Error> {
        let assignment = Self::build(matrix, num_helpers, AssignmentKind::Binary)?;
        for (l, row) in assignment.matrix.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                if v != 0.0 && v != 1.0 {
                    return Err(Error::InvalidAssignment(format!(
                        "binary entry ({l},{k}) = {v} is not exactly 0 or 1"
                    )));
                }
            }
        }
        Ok(assignment)
    }

    fn build(
        matrix: Vec<Vec<f64>>,
        num_helpers: usize,
        kind: AssignmentKind,
    ) -> Result<Self, Error> {
        let cols = num_helpers + 1;
        if matrix.is_empty() {
            return Err(Error::InvalidAssignment("empty matrix".into()));
        }
        for (l, row) in matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidAssignment(format!(
                    "row {l} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            let mut sum = 0.0;
            for (k, &v) in row.iter().enumerate() {
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidAssignment(format!(
                        "entry ({l},{k}) = {v} outside [0,1]"
                    )));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > AUDIT_TOL {
                return Err(Error::InvalidAssignment(format!(
                    "row {l} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(Self { matrix, kind })
    }

    /// Binary assignment from one node choice per task (`0..K` helper,
    /// `K` local).
    pub fn from_node_choices(choices: &[usize], num_helpers: usize) -> Result<Self, Error> {
        let cols = num_helpers + 1;
        let mut matrix = vec![vec![0.0; cols]; choices.len()];
        for (l, &node) in choices.iter().enumerate() {
            if node >= cols {
                return Err(Error::InvalidAssignment(format!(
                    "task {l} assigned to node {node}, only {cols} nodes exist"
                )));
            }
            matrix[l][node] = 1.0;
        }
        Self::binary(matrix, num_helpers)
    }

    /// Everything on the local user.
    pub fn all_local(num_tasks: usize, num_helpers: usize) -> Self {
        Self::from_node_choices(&vec![num_helpers; num_tasks], num_helpers)
            .expect("all-local choices are valid")
    }

    pub fn kind(&self) -> AssignmentKind {
        self.kind
    }

    pub fn is_binary(&self) -> bool {
        self.kind == AssignmentKind::Binary
    }

    pub fn num_tasks(&self) -> usize {
        self.matrix.len()
    }

    /// Number of columns, i.e. `K + 1`.
    pub fn num_nodes(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    /// Share of task `l` on node `node` (`0..K` helper, `K` local).
    pub fn share(&self, task: usize, node: usize) -> f64 {
        self.matrix[task][node]
    }

    /// For a binary assignment, the node index of task `l`.
    pub fn node_of(&self, task: usize) -> usize {
        self.matrix[task]
            .iter()
            .position(|&v| v == 1.0)
            .expect("binary row has exactly one 1")
    }

    /// Tasks assigned to `node` with share exactly 1 (the derived index-set
    /// view of a binary assignment).
    pub fn tasks_at(&self, node: usize) -> Vec<usize> {
        self.matrix
            .iter()
            .enumerate()
            .filter(|(_, row)| row[node] == 1.0)
            .map(|(l, _)| l)
            .collect()
    }

    /// Whether the dimensions match an instance.
    pub fn matches(&self, instance: &Instance) -> bool {
        self.num_tasks() == instance.num_tasks() && self.num_nodes() == instance.num_helpers() + 1
    }
}

/// TDMA transmission-time decision variables: one offload and one download
/// slot length per helper, plus the waiting time before helper 0's download
/// may start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceAllocation {
    /// Offload slot lengths, seconds, one per helper.
    pub t_off: Vec<f64>,
    /// Download slot lengths, seconds, one per helper.
    pub t_dl: Vec<f64>,
    /// Waiting time before the first download slot, seconds.
    pub i1: f64,
}

impl ResourceAllocation {
    pub fn zeros(num_helpers: usize) -> Self {
        Self { t_off: vec![0.0; num_helpers], t_dl: vec![0.0; num_helpers], i1: 0.0 }
    }

    /// The schedule-length objective `i1 + sum(t_dl)`.
    pub fn objective(&self) -> f64 {
        self.i1 + self.t_dl.iter().sum::<f64>()
    }

    pub fn is_valid(&self) -> bool {
        self.i1.is_finite()
            && self.i1 >= 0.0
            && self.t_off.iter().chain(self.t_dl.iter()).all(|t| t.is_finite() && *t >= 0.0)
    }
}

/// A scheme's final answer on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub assignment: Assignment,
    pub allocation: ResourceAllocation,
    /// Total latency in seconds.
    pub objective: f64,
    /// Consumed energy per node, helpers first, local last.
    pub node_energy: Vec<f64>,
    pub feasible: bool,
    pub scheme: SchemeLabel,
}

/// The executed timeline of a binary assignment under a given allocation:
/// per-node compute times, the TDMA waiting times, and all energy terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleReport {
    /// Compute time per node, helpers first, local last. Seconds.
    pub compute_time: Vec<f64>,
    /// Instant each helper may start its download, seconds; one per helper.
    pub waiting: Vec<f64>,
    /// Time at which the last download finishes, seconds.
    pub completion: f64,
    /// `max(local compute time, completion)`, seconds.
    pub total_latency: f64,
    /// Local user's total transmit energy across all offload slots, joules.
    pub offload_energy: f64,
    /// Local user's compute energy, joules.
    pub local_energy: f64,
    /// Per-helper compute energy, joules.
    pub helper_compute_energy: Vec<f64>,
    /// Per-helper download transmit energy, joules.
    pub helper_dl_energy: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_instance() -> Instance {
        Instance::new(
            vec![Task { input_bits: 1e4, output_bits: 1e3 }],
            Node { cpu_freq: 1e9, kappa: 1e-28, energy_budget: 0.01, cycles_per_bit: vec![500.0] },
            vec![Node {
                cpu_freq: 2e9,
                kappa: 1e-28,
                energy_budget: 0.01,
                cycles_per_bit: vec![400.0],
            }],
            vec![Channel { uplink_gain: 100.0, downlink_gain: 100.0 }],
            312_500.0,
        )
        .unwrap()
    }

    #[test]
    fn well_formed_instance_has_no_violations() {
        assert!(validate_instance(&tiny_instance()).is_empty());
    }

    #[test]
    fn zero_bandwidth_is_one_violation_naming_bandwidth() {
        let mut inst = tiny_instance();
        inst.bandwidth = 0.0;
        let violations = validate_instance(&inst);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "bandwidth");
    }

    #[test]
    fn cycles_length_mismatch_is_reported() {
        let mut inst = tiny_instance();
        inst.helpers[0].cycles_per_bit = vec![400.0, 300.0];
        let violations = validate_instance(&inst);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].field.contains("helpers[0].cycles_per_bit"));
    }

    #[test]
    fn assignment_row_sum_enforced() {
        let bad = Assignment::fractional(vec![vec![0.5, 0.4]], 1);
        assert!(bad.is_err());
        let good = Assignment::fractional(vec![vec![0.5, 0.5]], 1);
        assert!(good.is_ok());
    }

    #[test]
    fn binary_requires_exact_entries() {
        assert!(Assignment::binary(vec![vec![0.5, 0.5]], 1).is_err());
        assert!(Assignment::binary(vec![vec![1.0, 0.0]], 1).is_ok());
    }

    #[test]
    fn binary_round_trips_through_index_sets() {
        let assignment =
            Assignment::from_node_choices(&[0, 2, 1, 2], 2).unwrap();
        let k1 = assignment.num_nodes();
        let mut rebuilt = vec![vec![0.0; k1]; assignment.num_tasks()];
        for node in 0..k1 {
            for l in assignment.tasks_at(node) {
                rebuilt[l][node] = 1.0;
            }
        }
        assert_eq!(rebuilt, assignment.matrix());
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = tiny_instance();
        let parsed = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(parsed, inst);
    }

    #[test]
    fn instance_json_field_names_match_type_definitions() {
        let json = tiny_instance().to_json();
        for field in
            ["tasks", "local", "helpers", "channels", "bandwidth", "input_bits", "output_bits",
             "cpu_freq", "kappa", "energy_budget", "cycles_per_bit", "uplink_gain", "downlink_gain"]
        {
            assert!(json.contains(field), "missing field {field} in {json}");
        }
    }
}

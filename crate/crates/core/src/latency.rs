//! Closed-form latency and energy evaluation for a given assignment and
//! allocation: compute times and energies, link powers and energies, the
//! TDMA waiting-time recursion, and schedule tightening.
//!
//! Everything here is a pure function of immutable inputs.

use crate::model::{
    Assignment, Instance, ResourceAllocation, ScheduleReport, AUDIT_TOL,
};
use crate::Error;

/// Total input bits assigned to `node` (`0..K` helper, `K` local).
pub fn assigned_input_bits(assignment: &Assignment, instance: &Instance, node: usize) -> f64 {
    instance
        .tasks
        .iter()
        .enumerate()
        .map(|(l, task)| assignment.share(l, node) * task.input_bits)
        .sum()
}

/// Total output bits assigned to `node`.
pub fn assigned_output_bits(assignment: &Assignment, instance: &Instance, node: usize) -> f64 {
    instance
        .tasks
        .iter()
        .enumerate()
        .map(|(l, task)| assignment.share(l, node) * task.output_bits)
        .sum()
}

/// Local compute time and energy for the locally assigned share. Linear in
/// the assignment entries, so fractional assignments are accepted.
pub fn local_compute(assignment: &Assignment, instance: &Instance) -> (f64, f64) {
    let local_col = instance.num_helpers();
    let node = &instance.local;
    let cycles: f64 = instance
        .tasks
        .iter()
        .enumerate()
        .map(|(l, task)| assignment.share(l, local_col) * node.cycles_per_bit[l] * task.input_bits)
        .sum();
    (cycles / node.cpu_freq, node.kappa * cycles * node.cpu_freq * node.cpu_freq)
}

/// Compute time and energy at helper `helper` (0-based TDMA slot).
pub fn remote_compute(assignment: &Assignment, helper: usize, instance: &Instance) -> (f64, f64) {
    let node = &instance.helpers[helper];
    let cycles: f64 = instance
        .tasks
        .iter()
        .enumerate()
        .map(|(l, task)| assignment.share(l, helper) * node.cycles_per_bit[l] * task.input_bits)
        .sum();
    (cycles / node.cpu_freq, node.kappa * cycles * node.cpu_freq * node.cpu_freq)
}

/// Transmit power needed to move `bits` over a normalized-gain channel in
/// `duration` seconds: `(2^(bits/(duration*bandwidth)) - 1) / gain`.
/// Zero bits need zero power regardless of duration.
pub fn link_power(bits: f64, duration: f64, gain: f64, bandwidth: f64) -> Result<f64, Error> {
    if bits == 0.0 {
        return Ok(0.0);
    }
    if duration == 0.0 {
        return Err(Error::InfinitePower { bits });
    }
    if duration < 0.0 {
        return Err(Error::NonPositiveDuration(duration));
    }
    let rate = bits / duration;
    Ok(((std::f64::consts::LN_2 * rate / bandwidth).exp_m1()) / gain)
}

/// Transmit energy for the same link: `duration * link_power`. Strictly
/// decreasing in `duration` for positive bits, with limit
/// `bits * ln(2) / (gain * bandwidth)` as the duration grows.
pub fn link_energy(bits: f64, duration: f64, gain: f64, bandwidth: f64) -> Result<f64, Error> {
    Ok(link_power(bits, duration, gain, bandwidth)? * duration)
}

/// The `duration -> infinity` limit of [`link_energy`]; the cheapest possible
/// energy for moving `bits` over the channel.
pub fn link_energy_limit(bits: f64, gain: f64, bandwidth: f64) -> f64 {
    bits * std::f64::consts::LN_2 / (gain * bandwidth)
}

fn check_schedule_inputs(
    assignment: &Assignment,
    alloc: &ResourceAllocation,
    instance: &Instance,
) -> Result<(), Error> {
    if !assignment.is_binary() {
        return Err(Error::InvalidAssignment("schedule simulation needs a binary assignment".into()));
    }
    if !assignment.matches(instance) {
        return Err(Error::InvalidAssignment("assignment shape does not match instance".into()));
    }
    let k = instance.num_helpers();
    if alloc.t_off.len() != k || alloc.t_dl.len() != k {
        return Err(Error::InvalidAllocation {
            helper: 0,
            reason: format!("allocation sized for {} helpers, instance has {k}", alloc.t_off.len()),
        });
    }
    if !alloc.is_valid() {
        return Err(Error::InvalidAllocation {
            helper: 0,
            reason: "allocation entries must be finite and nonnegative".into(),
        });
    }
    for h in 0..k {
        let in_bits = assigned_input_bits(assignment, instance, h);
        let out_bits = assigned_output_bits(assignment, instance, h);
        if in_bits > 0.0 && alloc.t_off[h] == 0.0 {
            return Err(Error::InvalidAllocation {
                helper: h + 1,
                reason: format!("{in_bits} input bits assigned but zero offload time"),
            });
        }
        if in_bits == 0.0 && alloc.t_off[h] != 0.0 {
            return Err(Error::InvalidAllocation {
                helper: h + 1,
                reason: "offload time must be zero when no input bits are assigned".into(),
            });
        }
        if out_bits > 0.0 && alloc.t_dl[h] == 0.0 {
            return Err(Error::InvalidAllocation {
                helper: h + 1,
                reason: format!("{out_bits} output bits assigned but zero download time"),
            });
        }
        if out_bits == 0.0 && alloc.t_dl[h] != 0.0 {
            return Err(Error::InvalidAllocation {
                helper: h + 1,
                reason: "download time must be zero when no output bits are assigned".into(),
            });
        }
    }
    Ok(())
}

/// Execute the three-phase TDMA timeline for a binary assignment.
///
/// Helper 0 may start downloading once its own compute is done and every
/// offload slot has finished; each later helper additionally waits for its
/// predecessor's download slot. Local compute runs concurrently with all
/// remote phases.
pub fn simulate_schedule(
    assignment: &Assignment,
    alloc: &ResourceAllocation,
    instance: &Instance,
) -> Result<ScheduleReport, Error> {
    check_schedule_inputs(assignment, alloc, instance)?;
    let k = instance.num_helpers();
    let bandwidth = instance.bandwidth;

    let (local_time, local_energy) = local_compute(assignment, instance);
    let mut compute_time = Vec::with_capacity(k + 1);
    let mut helper_compute_energy = Vec::with_capacity(k);
    for h in 0..k {
        let (t, e) = remote_compute(assignment, h, instance);
        compute_time.push(t);
        helper_compute_energy.push(e);
    }
    compute_time.push(local_time);

    let total_offload: f64 = alloc.t_off.iter().sum();
    let mut waiting = Vec::with_capacity(k);
    let mut offload_prefix = 0.0;
    for h in 0..k {
        offload_prefix += alloc.t_off[h];
        let ready = offload_prefix + compute_time[h];
        let start = if h == 0 {
            ready.max(total_offload)
        } else {
            ready.max(waiting[h - 1] + alloc.t_dl[h - 1])
        };
        waiting.push(start);
    }
    let completion = if k > 0 { waiting[k - 1] + alloc.t_dl[k - 1] } else { 0.0 };
    let total_latency = local_time.max(completion);

    let mut offload_energy = 0.0;
    let mut helper_dl_energy = Vec::with_capacity(k);
    for h in 0..k {
        let in_bits = assigned_input_bits(assignment, instance, h);
        let out_bits = assigned_output_bits(assignment, instance, h);
        offload_energy +=
            link_energy(in_bits, alloc.t_off[h], instance.channels[h].uplink_gain, bandwidth)?;
        helper_dl_energy.push(link_energy(
            out_bits,
            alloc.t_dl[h],
            instance.channels[h].downlink_gain,
            bandwidth,
        )?);
    }

    Ok(ScheduleReport {
        compute_time,
        waiting,
        completion,
        total_latency,
        offload_energy,
        local_energy,
        helper_compute_energy,
        helper_dl_energy,
    })
}

/// Extend download slots so the waiting-time recursion becomes the tight
/// chain `I_k = I_{k-1} + t_dl[k-1]`, and stretch the final download until
/// remote completion covers the local compute time. Extending a download
/// only lowers that helper's transmit energy, so feasibility is preserved.
///
/// The input must satisfy the schedule-length constraints and the energy
/// budgets; offload times and `i1` are returned unchanged.
pub fn tighten_schedule(
    assignment: &Assignment,
    alloc: &ResourceAllocation,
    instance: &Instance,
) -> Result<ResourceAllocation, Error> {
    check_schedule_inputs(assignment, alloc, instance)?;
    let k = instance.num_helpers();

    let (local_time, _) = local_compute(assignment, instance);
    let compute: Vec<f64> = (0..k).map(|h| remote_compute(assignment, h, instance).0).collect();
    let total_offload: f64 = alloc.t_off.iter().sum();
    let total_dl: f64 = alloc.t_dl.iter().sum();
    let scale = 1.0 + alloc.i1 + total_offload + total_dl + local_time;
    let tol = 1e-7 * scale;

    // Schedule-length feasibility of the input allocation.
    if total_offload > alloc.i1 + tol {
        return Err(Error::InvalidAllocation {
            helper: 0,
            reason: format!("offload slots {total_offload} exceed waiting time {}", alloc.i1),
        });
    }
    if alloc.t_off[0] + compute[0] > alloc.i1 + tol {
        return Err(Error::InvalidAllocation {
            helper: 1,
            reason: "compute would not finish before the first download slot".into(),
        });
    }
    if local_time > alloc.i1 + total_dl + tol {
        return Err(Error::InvalidAllocation {
            helper: 0,
            reason: "local compute exceeds the schedule length".into(),
        });
    }
    let mut dl_prefix = 0.0;
    let mut off_prefix = alloc.t_off[0];
    for h in 1..k {
        dl_prefix += alloc.t_dl[h - 1];
        off_prefix += alloc.t_off[h];
        if compute[h] + off_prefix > alloc.i1 + dl_prefix + tol {
            return Err(Error::InvalidAllocation {
                helper: h + 1,
                reason: "compute would not finish before its download slot".into(),
            });
        }
    }
    let (node_energy, energy_ok) = energy_audit(assignment, alloc, instance);
    if !energy_ok {
        return Err(Error::InvalidAllocation {
            helper: 0,
            reason: format!("energy budgets violated: {node_energy:?}"),
        });
    }

    let mut t_dl = alloc.t_dl.clone();
    let out_bits: Vec<f64> =
        (0..k).map(|h| assigned_output_bits(assignment, instance, h)).collect();

    // Merge the recursion front to back: whenever a helper's compute finish
    // would dominate, slow the предыдущий download instead.
    let mut start = (alloc.t_off[0] + compute[0]).max(total_offload);
    let mut offload_prefix = alloc.t_off[0];
    for h in 1..k {
        offload_prefix += alloc.t_off[h];
        let ready = offload_prefix + compute[h];
        if ready > start + t_dl[h - 1] && out_bits[h - 1] > 0.0 {
            t_dl[h - 1] = ready - start;
        }
        start = ready.max(start + t_dl[h - 1]);
    }
    let remote_completion = start + t_dl[k - 1];

    // Cover local compute by stretching the last nonempty download.
    if local_time > remote_completion {
        if let Some(h) = (0..k).rev().find(|&h| out_bits[h] > 0.0) {
            t_dl[h] += local_time - remote_completion;
        }
    }

    Ok(ResourceAllocation { t_off: alloc.t_off.clone(), t_dl, i1: alloc.i1 })
}

/// Total consumed energy per node (helpers first, local last) and whether
/// every node stays within its budget. A positive-bit link with zero slot
/// time is reported as infinite energy rather than an error.
pub fn energy_audit(
    assignment: &Assignment,
    alloc: &ResourceAllocation,
    instance: &Instance,
) -> (Vec<f64>, bool) {
    let k = instance.num_helpers();
    let bandwidth = instance.bandwidth;
    let mut node_energy = Vec::with_capacity(k + 1);

    let link = |bits: f64, duration: f64, gain: f64| -> f64 {
        link_energy(bits, duration, gain, bandwidth).unwrap_or(f64::INFINITY)
    };

    for h in 0..k {
        let (_, compute_energy) = remote_compute(assignment, h, instance);
        let dl = link(
            assigned_output_bits(assignment, instance, h),
            alloc.t_dl[h],
            instance.channels[h].downlink_gain,
        );
        node_energy.push(compute_energy + dl);
    }
    let (_, local_compute_energy) = local_compute(assignment, instance);
    let offload: f64 = (0..k)
        .map(|h| {
            link(
                assigned_input_bits(assignment, instance, h),
                alloc.t_off[h],
                instance.channels[h].uplink_gain,
            )
        })
        .sum();
    node_energy.push(local_compute_energy + offload);

    let ok = node_energy.iter().enumerate().all(|(i, &e)| {
        let budget = if i < k { instance.helpers[i].energy_budget } else { instance.local.energy_budget };
        e <= budget + AUDIT_TOL
    });
    (node_energy, ok)
}

//! Full `2^n` state-vector simulation of real two-qubit Givens rotations.

/// Basis state `index` with amplitude 1 over `n_qubits` qubits; qubit `k` is bit `k`.
pub fn basis_state(n_qubits: usize, index: usize) -> Vec<f64> {
    let mut v = vec![0.0; 1 << n_qubits];
    v[index] = 1.0;
    v
}

/// Rotate the `{|01⟩, |10⟩}` subspace of qubits `(a, b)`, where `|01⟩` means
/// qubit `a` is 0 and qubit `b` is 1:
/// `|01⟩ → cos θ |01⟩ + sin θ |10⟩`, `|10⟩ → −sin θ |01⟩ + cos θ |10⟩`.
pub fn apply_givens(state: &mut [f64], a: usize, b: usize, theta: f64) {
    let (c, s) = (theta.cos(), theta.sin());
    for i in 0..state.len() {
        let qa = i >> a & 1;
        let qb = i >> b & 1;
        if qa == 0 && qb == 1 {
            let j = i ^ (1 << a) ^ (1 << b);
            let (x01, x10) = (state[i], state[j]);
            state[i] = c * x01 - s * x10;
            state[j] = s * x01 + c * x10;
        }
    }
}

/// Run `(a, b, theta)` rotations in order from a basis state.
pub fn simulate(n_qubits: usize, start: usize, gates: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut v = basis_state(n_qubits, start);
    for &(a, b, t) in gates {
        apply_givens(&mut v, a, b, t);
    }
    v
}

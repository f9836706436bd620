use num_traits::Num;

/// Principal Ricci curvatures of the left-invariant metric with orthonormal
/// Milnor frame `[e₂,e₃] = λ₁e₁`, `[e₃,e₁] = λ₂e₂`, `[e₁,e₂] = λ₃e₃`.
///
/// `μᵢ = ½(λ₁+λ₂+λ₃) − λᵢ` and `ρ(eᵢ,eᵢ) = 2μⱼμₖ`.
pub fn milnor_ricci<T: Num + Clone>(l1: T, l2: T, l3: T) -> [T; 3] {
    let two = T::one() + T::one();
    let half_sum = (l1.clone() + l2.clone() + l3.clone()) / two.clone();
    let m1 = half_sum.clone() - l1;
    let m2 = half_sum.clone() - l2;
    let m3 = half_sum - l3;
    [
        two.clone() * m2.clone() * m3.clone(),
        two.clone() * m1.clone() * m3,
        two * m1 * m2,
    ]
}

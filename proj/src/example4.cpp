#include "dsrefine/example4.hpp"

namespace dsrefine::example4 {

DescriptorSystem concrete() {
    Matrix E(3, 3), A(3, 3), B(3, 1), C(1, 3);
    E << 1, 0, 0,
         0, 0, 1,
         0, 0, 0;
    A << -1, 0, 0,
          0, 1, 0,
          0, 0, 1;
    B << 1, 1, 1;
    C << 0, 0.2, 0.5;
    Vector lo = Vector::Constant(3, -1.0), hi = Vector::Constant(3, 1.0);
    return DescriptorSystem(E, A, B, C, InitialSet::box(lo, hi));
}

DescriptorSystem abstract_system() {
    Matrix E(2, 2), A(2, 2), B(2, 1), C(1, 2);
    E << 0, 0,
         1, 0;
    A = Matrix::Identity(2, 2);
    B << 1, 0;
    C << 0.7, 0.2;
    return DescriptorSystem(E, A, B, C, InitialSet::full_space(2));
}

Matrix relation_h() {
    Matrix H(2, 3);
    H << 0, 0, 1,
         0, 1, -1;
    return H;
}

Controller abstract_controller() {
    Matrix Ec(1, 2), Ac(1, 2), Bc(1, 1);
    Ec << 1, 1;
    Ac << 0.5, 0.5;
    Bc << 1;
    return Controller(Ec, Ac, Bc);
}

DrivingVariableSystem concrete_dv_reference() {
    DrivingVariableSystem dv;
    dv.Ad.resize(3, 3);
    dv.Ad << -1, 0, -1,
              0, 0,  0,
              0, 1, -1;
    dv.Bd.resize(3, 1);
    dv.Bd << 0, -1, 0;
    dv.Cu.resize(1, 3);
    dv.Cu << 0, 0, -1;
    dv.Du = Matrix::Zero(1, 1);
    dv.C.resize(1, 3);
    dv.C << 0, 0.2, 0.5;
    dv.init = concrete().init;
    return dv;
}

DrivingVariableSystem abstract_dv_reference() {
    DrivingVariableSystem dv;
    dv.Ad.resize(2, 2);
    dv.Ad << 0, 1,
             0, 0;
    dv.Bd.resize(2, 1);
    dv.Bd << 0, -1;
    dv.Cu.resize(1, 2);
    dv.Cu << -1, 0;
    dv.Du = Matrix::Zero(1, 1);
    dv.C.resize(1, 2);
    dv.C << 0.7, 0.2;
    dv.init = InitialSet::full_space(2);
    return dv;
}

Matrix closed_loop_substituted() {
    Matrix K(3, 3);
    K << -1, 0, -1,
          0, 0.5, -1,
          0, 1, -1;
    return K;
}

}  // namespace dsrefine::example4

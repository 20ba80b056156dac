#include "robinsqp/fem.hpp"

#include "robinsqp/errors.hpp"
#include "robinsqp/parallel.hpp"

#include <cmath>
#include <vector>

namespace robinsqp {

namespace {

struct LocalPair {
    double k[4][4];
    double m[4][4];
};

double element_volume(const Mesh& mesh, const std::array<int, 4>& el) {
    if (mesh.dim == 2) {
        Eigen::Vector2d a = mesh.nodes.row(el[1]) - mesh.nodes.row(el[0]);
        Eigen::Vector2d b = mesh.nodes.row(el[2]) - mesh.nodes.row(el[0]);
        return 0.5 * std::fabs(a.x() * b.y() - a.y() * b.x());
    }
    Eigen::Vector3d a = mesh.nodes.row(el[1]) - mesh.nodes.row(el[0]);
    Eigen::Vector3d b = mesh.nodes.row(el[2]) - mesh.nodes.row(el[0]);
    Eigen::Vector3d c = mesh.nodes.row(el[3]) - mesh.nodes.row(el[0]);
    return std::fabs(a.cross(b).dot(c)) / 6.0;
}

LocalPair local_matrices(const Mesh& mesh, const Eigen::MatrixXd& diffusion,
                         const std::array<int, 4>& el) {
    const int d = mesh.dim;
    const int nv = d + 1;
    // Basis gradients from the vertex matrix [1 | x_i] of the simplex.
    Eigen::MatrixXd vm(nv, nv);
    for (int i = 0; i < nv; ++i) {
        vm(i, 0) = 1.0;
        for (int c = 0; c < d; ++c) vm(i, c + 1) = mesh.nodes(el[static_cast<size_t>(i)], c);
    }
    Eigen::MatrixXd coeff = vm.inverse();                 // column i: basis i
    Eigen::MatrixXd grads = coeff.bottomRows(d);          // d x nv
    const double vol = element_volume(mesh, el);

    LocalPair out{};
    Eigen::MatrixXd kd = vol * grads.transpose() * diffusion * grads;
    const double mfac = vol / ((d + 1.0) * (d + 2.0));
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j) {
            out.k[i][j] = kd(i, j);
            out.m[i][j] = mfac * (i == j ? 2.0 : 1.0);
        }
    return out;
}

double face_area(const Mesh& mesh, const std::array<int, 3>& face) {
    if (mesh.dim == 2) return (mesh.nodes.row(face[1]) - mesh.nodes.row(face[0])).norm();
    Eigen::Vector3d a = mesh.nodes.row(face[1]) - mesh.nodes.row(face[0]);
    Eigen::Vector3d b = mesh.nodes.row(face[2]) - mesh.nodes.row(face[0]);
    return 0.5 * a.cross(b).norm();
}

// Exact integrals of products of face basis functions: segments use
// a! b! / (a+b+1)! * length, triangles 2 a! b! c! / (a+b+c+2)! * area.
void face_trilinear(const Mesh& mesh, const std::array<int, 3>& face, const double* cvals,
                    double out[3][3]) {
    const double area = face_area(mesh, face);
    if (mesh.dim == 2) {
        const double p3 = area / 4.0, p21 = area / 12.0;
        const double c0 = cvals[0], c1 = cvals[1];
        out[0][0] = c0 * p3 + c1 * p21;
        out[1][1] = c0 * p21 + c1 * p3;
        out[0][1] = out[1][0] = (c0 + c1) * p21;
        return;
    }
    const double p3 = area / 10.0, p21 = area / 30.0, p111 = area / 60.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) {
                double w;
                if (i == j && j == k) w = p3;
                else if (i == j || j == k || i == k) w = p21;
                else w = p111;
                v += cvals[k] * w;
            }
            out[i][j] = v;
        }
}

} // namespace

FemMatrices assemble(const Mesh& mesh, const Eigen::MatrixXd& diffusion) {
    const int d = mesh.dim;
    Eigen::MatrixXd lambda = diffusion;
    if (lambda.size() == 0) lambda = Eigen::MatrixXd::Identity(d, d);
    if (lambda.rows() != d || lambda.cols() != d)
        throw ValidationError("diffusion tensor must be dim x dim");
    if (!lambda.isApprox(lambda.transpose(), 1e-14))
        throw ValidationError("diffusion tensor must be symmetric");
    if (Eigen::LLT<Eigen::MatrixXd>(lambda).info() != Eigen::Success)
        throw ValidationError("diffusion tensor must be positive definite");

    const Eigen::Index n = mesh.node_count();
    const auto ne = static_cast<std::int64_t>(mesh.elements.size());
    std::vector<LocalPair> local(static_cast<std::size_t>(ne));
    par::for_each(ne, [&](std::int64_t e) {
        local[static_cast<std::size_t>(e)] =
            local_matrices(mesh, lambda, mesh.elements[static_cast<std::size_t>(e)]);
    });

    const int nv = d + 1;
    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(static_cast<std::size_t>(ne) * nv * nv);
    mt.reserve(static_cast<std::size_t>(ne) * nv * nv);
    for (std::int64_t e = 0; e < ne; ++e) {
        const auto& el = mesh.elements[static_cast<std::size_t>(e)];
        const auto& lp = local[static_cast<std::size_t>(e)];
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j) {
                kt.emplace_back(el[static_cast<size_t>(i)], el[static_cast<size_t>(j)],
                                lp.k[i][j]);
                mt.emplace_back(el[static_cast<size_t>(i)], el[static_cast<size_t>(j)],
                                lp.m[i][j]);
            }
    }

    FemMatrices fem;
    fem.stiffness.resize(n, n);
    fem.stiffness.setFromTriplets(kt.begin(), kt.end());
    fem.mass.resize(n, n);
    fem.mass.setFromTriplets(mt.begin(), mt.end());
    fem.lumped_mass = fem.mass * Eigen::VectorXd::Ones(n);
    fem.boundary_mass = boundary_bilinear(mesh, Eigen::VectorXd::Ones(n));
    fem.boundary_lumped = fem.boundary_mass * Eigen::VectorXd::Ones(n);
    return fem;
}

Eigen::SparseMatrix<double> boundary_bilinear(const Mesh& mesh, const Eigen::VectorXd& c_nodal) {
    if (c_nodal.size() != mesh.node_count())
        throw ValidationError("boundary weight must be a global nodal vector");
    const int nv = mesh.dim;
    const auto nf = static_cast<std::int64_t>(mesh.boundary_faces.size());
    std::vector<std::array<double, 9>> local(static_cast<std::size_t>(nf));
    par::for_each(nf, [&](std::int64_t f) {
        const auto& face = mesh.boundary_faces[static_cast<std::size_t>(f)];
        double cv[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < nv; ++i) cv[i] = c_nodal[face[static_cast<size_t>(i)]];
        double b[3][3];
        face_trilinear(mesh, face, cv, b);
        auto& dst = local[static_cast<std::size_t>(f)];
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j) dst[static_cast<size_t>(3 * i + j)] = b[i][j];
    });

    std::vector<Eigen::Triplet<double>> bt;
    bt.reserve(static_cast<std::size_t>(nf) * nv * nv);
    for (std::int64_t f = 0; f < nf; ++f) {
        const auto& face = mesh.boundary_faces[static_cast<std::size_t>(f)];
        const auto& src = local[static_cast<std::size_t>(f)];
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j)
                bt.emplace_back(face[static_cast<size_t>(i)], face[static_cast<size_t>(j)],
                                src[static_cast<size_t>(3 * i + j)]);
    }
    Eigen::SparseMatrix<double> b(mesh.node_count(), mesh.node_count());
    b.setFromTriplets(bt.begin(), bt.end());
    return b;
}

} // namespace robinsqp

//! Material resolution, element-local system construction, global scatter,
//! and Dirichlet elimination.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{material_tensor, triangle_geometry, AnisotropyTensor};
use crate::local_ops::{local_system_dec, local_system_feml, LocalSystem, Method};
use crate::mesh::{MaterialSpec, TriMesh};
use crate::system::{LinearSystem, SparseSym, SystemError};

/// Material id -> (resolved tensor, source density).
#[derive(Clone, Debug)]
pub struct MaterialMap {
    map: BTreeMap<usize, (AnisotropyTensor, f64)>,
}

impl MaterialMap {
    pub fn build(specs: &[MaterialSpec]) -> Result<MaterialMap, SystemError> {
        let mut map = BTreeMap::new();
        for spec in specs {
            let tensor = material_tensor(spec.kx, spec.ky, spec.angle_deg)
                .map_err(|source| SystemError::Material { id: spec.id, source })?;
            if map.insert(spec.id, (tensor, spec.q)).is_some() {
                return Err(SystemError::DuplicateMaterial { id: spec.id });
            }
        }
        Ok(MaterialMap { map })
    }

    pub fn get(&self, id: usize) -> Option<&(AnisotropyTensor, f64)> {
        self.map.get(&id)
    }
}

/// Local stiffness and load of one element under the requested method. The
/// element's constant source density is placed at all three of its nodes.
pub fn element_system(
    mesh: &TriMesh,
    materials: &MaterialMap,
    e: usize,
    method: Method,
) -> Result<LocalSystem, SystemError> {
    let tri = mesh.triangles()[e];
    let &(tensor, q) = materials
        .get(tri.material)
        .ok_or(SystemError::MissingMaterial { id: tri.material })?;
    let [v1, v2, v3] = mesh.vertices_of(e);
    let q_nodal = [q, q, q];
    match method {
        Method::Dec => {
            let geom = triangle_geometry(v1, v2, v3)
                .map_err(|source| SystemError::Geometry { element: e, source })?;
            Ok(local_system_dec(&geom, &tensor, q_nodal))
        }
        Method::Feml => local_system_feml(v1, v2, v3, &tensor, q_nodal)
            .map_err(|source| SystemError::Geometry { element: e, source }),
    }
}

/// Local systems for every element, in element order.
pub fn element_systems(
    mesh: &TriMesh,
    materials: &MaterialMap,
    method: Method,
) -> Result<Vec<LocalSystem>, SystemError> {
    (0..mesh.num_elements())
        .map(|e| element_system(mesh, materials, e, method))
        .collect()
}

/// Scatters precomputed local systems (one per element, in element order)
/// into the global matrix and right-hand side.
pub fn assemble_from(mesh: &TriMesh, systems: &[LocalSystem]) -> (SparseSym, Vec<f64>) {
    assert_eq!(systems.len(), mesh.num_elements(), "one local system per element");
    let n = mesh.num_nodes();
    let mut triplets = Vec::with_capacity(9 * systems.len());
    let mut rhs = vec![0.0; n];
    for (tri, local) in mesh.triangles().iter().zip(systems) {
        for i in 0..3 {
            rhs[tri.nodes[i]] += local.load[i];
            for j in 0..3 {
                triplets.push((tri.nodes[i], tri.nodes[j], local.stiffness.m[i][j]));
            }
        }
    }
    (SparseSym::from_triplets(n, &triplets), rhs)
}

/// Assembles the global system, boundary conditions not yet applied
/// (`fixed` starts empty).
pub fn assemble(
    mesh: &TriMesh,
    materials: &[MaterialSpec],
    method: Method,
) -> Result<LinearSystem, SystemError> {
    let map = MaterialMap::build(materials)?;
    let systems = element_systems(mesh, &map, method)?;
    let (matrix, rhs) = assemble_from(mesh, &systems);
    Ok(LinearSystem { matrix, rhs, fixed: crate::mesh::DirichletSet::new() })
}

/// Symmetric elimination of the fixed nodes: for every fixed node j with
/// value g, subtracts A_ij * g from each free rhs entry, zeroes row and
/// column j, and puts an identity row in their place (A_jj = 1, rhs_j = g).
/// The matrix stays symmetric and the fixed values are imposed exactly.
pub fn apply_dirichlet(sys: LinearSystem) -> Result<LinearSystem, SystemError> {
    if sys.fixed.is_empty() {
        return Err(SystemError::EmptyDirichlet);
    }
    let LinearSystem { mut matrix, mut rhs, fixed } = sys;
    let n = matrix.n();
    for (j, _) in fixed.iter() {
        if j >= n {
            return Err(SystemError::FixedNodeOutOfRange { node: j });
        }
    }

    // Move the known column contributions to the right-hand side before any
    // entry is overwritten.
    for (j, g) in fixed.iter() {
        let neighbors: Vec<usize> = matrix.row(j).map(|(i, _)| i).collect();
        for i in neighbors {
            if !fixed.contains(i) {
                rhs[i] -= matrix.get(i, j) * g;
            }
        }
    }

    for (j, g) in fixed.iter() {
        let neighbors: Vec<usize> = matrix.row(j).map(|(i, _)| i).collect();
        for i in neighbors {
            matrix.set(j, i, 0.0);
            matrix.set(i, j, 0.0);
        }
        matrix.set(j, j, 1.0);
        rhs[j] = g;
    }

    Ok(LinearSystem { matrix, rhs, fixed })
}

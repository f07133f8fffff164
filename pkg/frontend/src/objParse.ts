// Minimal OBJ text parser for the meshes the service serves: v / vt /
// triangular f records, 1-based indices, optional i/i UV references.

export interface ParsedMesh {
  positions: Float64Array; // 3 * vertexCount
  uvs: Float64Array | null; // 2 * vertexCount when vt records exist
  faces: Uint32Array; // 3 * faceCount
  vertexCount: number;
  faceCount: number;
}

export function parseObj(text: string): ParsedMesh {
  const positions: number[] = [];
  const uvs: number[] = [];
  const faces: number[] = [];
  for (const raw of text.split("\n")) {
    const parts = raw.trim().split(/\s+/);
    if (parts[0] === "v") {
      positions.push(Number(parts[1]), Number(parts[2]), Number(parts[3]));
    } else if (parts[0] === "vt") {
      uvs.push(Number(parts[1]), Number(parts[2]));
    } else if (parts[0] === "f") {
      if (parts.length !== 4) throw new Error(`non-triangle face: ${raw.trim()}`);
      for (let k = 1; k <= 3; k++) {
        faces.push(parseInt(parts[k].split("/")[0], 10) - 1);
      }
    }
  }
  const vertexCount = positions.length / 3;
  for (const f of faces) {
    if (f < 0 || f >= vertexCount) throw new Error(`face index ${f + 1} out of range`);
  }
  return {
    positions: new Float64Array(positions),
    uvs: uvs.length === 2 * vertexCount ? new Float64Array(uvs) : null,
    faces: new Uint32Array(faces),
    vertexCount,
    faceCount: faces.length / 3,
  };
}

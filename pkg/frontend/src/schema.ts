// Correspondence wire format (schema version 1).
// Pixel origin is the image's top-left corner, x rightward, y downward —
// the same convention the server validates, independent of how any canvas
// happens to be oriented.

export interface Pair {
  vertex: number;
  pixel: [number, number];
}

export interface CorrespondenceDoc {
  version: 1;
  image: { width: number; height: number };
  pairs: Pair[];
}

export function toSchemaDoc(
  pairs: Pair[],
  imageWidth: number,
  imageHeight: number,
): CorrespondenceDoc {
  return {
    version: 1,
    image: { width: imageWidth, height: imageHeight },
    pairs: pairs.map((p) => ({ vertex: p.vertex, pixel: [p.pixel[0], p.pixel[1]] })),
  };
}

export function parseSchemaDoc(text: string): CorrespondenceDoc {
  const doc = JSON.parse(text);
  if (typeof doc !== "object" || doc === null) throw new Error("document must be an object");
  const version = doc.version ?? 1;
  if (version !== 1) throw new Error(`unsupported schema version ${version}`);
  const image = doc.image;
  if (!image || !Number.isInteger(image.width) || !Number.isInteger(image.height)) {
    throw new Error("image: width and height must be integers");
  }
  if (!Array.isArray(doc.pairs) || doc.pairs.length < 1) {
    throw new Error("pairs: at least one pair required");
  }
  const seen = new Set<number>();
  const pairs: Pair[] = doc.pairs.map((p: unknown, k: number) => {
    const pair = p as { vertex?: unknown; pixel?: unknown };
    if (!Number.isInteger(pair.vertex) || (pair.vertex as number) < 0) {
      throw new Error(`pairs[${k}].vertex: must be a non-negative integer`);
    }
    const vertex = pair.vertex as number;
    if (seen.has(vertex)) throw new Error(`pairs[${k}].vertex: duplicate vertex ${vertex}`);
    seen.add(vertex);
    const px = pair.pixel as unknown[];
    if (!Array.isArray(px) || px.length !== 2 || !px.every((x) => typeof x === "number")) {
      throw new Error(`pairs[${k}].pixel: must be [x, y]`);
    }
    const [x, y] = px as [number, number];
    if (x < 0 || x > image.width) throw new Error(`pairs[${k}].pixel[0]: outside [0, ${image.width}]`);
    if (y < 0 || y > image.height) throw new Error(`pairs[${k}].pixel[1]: outside [0, ${image.height}]`);
    return { vertex, pixel: [x, y] };
  });
  return { version: 1, image: { width: image.width, height: image.height }, pairs };
}

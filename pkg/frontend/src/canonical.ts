// Canonical serialization and digests, matching the server scheme exactly:
// UTF-8 JSON with lexicographically ordered keys and no insignificant
// whitespace, hashed with SHA-256. Every value in room state is a string,
// integer, boolean, null, array, or object, so JSON.stringify of each scalar
// is byte-identical to the server's encoder.

type Json = string | number | boolean | null | Json[] | { [key: string]: Json };

export function canonicalStringify(value: Json): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(canonicalStringify).join(",")}]`;
  }
  const keys = Object.keys(value).sort();
  const parts = keys.map((key) => `${JSON.stringify(key)}:${canonicalStringify(value[key])}`);
  return `{${parts.join(",")}}`;
}

export async function sha256Hex(text: string): Promise<string> {
  const bytes = new TextEncoder().encode(text);
  const digest = await crypto.subtle.digest("SHA-256", bytes);
  return Array.from(new Uint8Array(digest))
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("");
}

export async function digestValue(value: unknown): Promise<string> {
  return sha256Hex(canonicalStringify(value as Json));
}

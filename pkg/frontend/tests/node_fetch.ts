/* Minimal HTTP adapter on node:http for the live-service tests.
 *
 * The DOM test environment replaces the global fetch, so the live tests
 * talk to the real service through this adapter instead; it implements
 * just the FetchLike surface the API client needs.
 */

import { request as httpRequest } from 'node:http';
import type { FetchLike, HttpResponse } from '../src/api.js';

export const nodeHttpFetch: FetchLike = (url, init) =>
  new Promise<HttpResponse>((resolve, reject) => {
    const req = httpRequest(
      url,
      { method: init?.method ?? 'GET', headers: init?.headers ?? {} },
      (res) => {
        const chunks: Buffer[] = [];
        res.on('data', (chunk: Buffer) => chunks.push(chunk));
        res.on('end', () => {
          const status = res.statusCode ?? 0;
          const text = Buffer.concat(chunks).toString('utf-8');
          resolve({
            ok: status >= 200 && status < 300,
            status,
            text: () => Promise.resolve(text),
          });
        });
      },
    );
    req.on('error', reject);
    if (init?.body !== undefined) {
      req.write(init.body);
    }
    req.end();
  });
